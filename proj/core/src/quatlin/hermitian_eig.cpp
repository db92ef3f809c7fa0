#include "qdsmds/quatlin/hermitian_eig.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace qdsmds::quatlin {
namespace {

inline double real_of(double v) { return v; }
inline double real_of(const Complex& v) { return v.real(); }
inline double abs_of(double v) { return std::abs(v); }
inline double abs_of(const Complex& v) { return std::abs(v); }

template <typename T>
T unit_phase(const T& v) {
  const double a = abs_of(v);
  return a > 0.0 ? v / a : T(1.0);
}

template <typename T>
void require_hermitian(const Matrix<T>& a, const Tolerances& tol) {
  if (!a.is_square()) throw Error(ErrorCode::kNotHermitian, "matrix is not square");
  if (!is_hermitian(a, tol.hermitian_rel)) {
    throw Error(ErrorCode::kNotHermitian, "asymmetry exceeds relative tolerance");
  }
}

// Reorders values descending and permutes the eigenvector columns with them.
template <typename T>
void sort_descending(EigenResult<T>& res) {
  const std::size_t n = res.values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return res.values[a] > res.values[b]; });
  std::vector<double> values(n);
  for (std::size_t k = 0; k < n; ++k) values[k] = res.values[order[k]];
  res.values = std::move(values);
  if (res.vectors.size() == 0) return;
  Matrix<T> vectors(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t k = 0; k < n; ++k) vectors(r, k) = res.vectors(r, order[k]);
  res.vectors = std::move(vectors);
}

// ---------------------------------------------------------------------------
// Cyclic Jacobi.

template <typename T>
EigenResult<T> jacobi(Matrix<T> a, const EigenOptions& opt) {
  const std::size_t n = a.rows();
  EigenResult<T> res;
  Matrix<T> v;
  if (opt.compute_vectors) v = Matrix<T>::identity(n);

  const double scale = frobenius_norm(a);
  const double threshold = opt.tol.jacobi_offdiag_rel * scale;
  int sweep = 0;
  for (;; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += 2.0 * abs2_of(a(p, q));
    if (std::sqrt(off) <= threshold) break;
    if (sweep >= opt.tol.jacobi_max_sweeps) {
      throw Error(ErrorCode::kNoConvergence,
                  "Jacobi exceeded " + std::to_string(opt.tol.jacobi_max_sweeps) + " sweeps");
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const T b = a(p, q);
        const double mag = abs_of(b);
        if (mag == 0.0) continue;
        // Phase-rotate the pivot to a real positive value, then apply the
        // classic real rotation: J = diag(1, u) * [[c, s], [-s, c]].
        const T u = conj_of(b) / mag;
        const double theta = (real_of(a(q, q)) - real_of(a(p, p))) / (2.0 * mag);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const T su = s * u;
        const T cu = c * u;
        const T su_c = conj_of(su);
        const T cu_c = conj_of(cu);
        for (std::size_t r = 0; r < n; ++r) {
          const T x = a(r, p);
          const T y = a(r, q);
          a(r, p) = c * x - su * y;
          a(r, q) = s * x + cu * y;
        }
        for (std::size_t col = 0; col < n; ++col) {
          const T x = a(p, col);
          const T y = a(q, col);
          a(p, col) = c * x - su_c * y;
          a(q, col) = s * x + cu_c * y;
        }
        a(p, q) = T{};
        a(q, p) = T{};
        a(p, p) = T(real_of(a(p, p)));
        a(q, q) = T(real_of(a(q, q)));
        if (opt.compute_vectors) {
          for (std::size_t r = 0; r < n; ++r) {
            const T x = v(r, p);
            const T y = v(r, q);
            v(r, p) = c * x - su * y;
            v(r, q) = s * x + cu * y;
          }
        }
      }
    }
  }
  res.values.resize(n);
  for (std::size_t k = 0; k < n; ++k) res.values[k] = real_of(a(k, k));
  res.vectors = std::move(v);
  res.iterations = sweep;
  return res;
}

// ---------------------------------------------------------------------------
// Householder tridiagonalization + implicit QL.

// H = I - w w^H / h acting on indices [base, n).
template <typename T>
struct Reflector {
  std::size_t base = 0;
  double h = 1.0;
  std::vector<T> w;
};

// Reduces a (in place) to Hermitian tridiagonal form Q^H A Q. Writes the
// real diagonal into d and the (possibly complex) subdiagonal into e, where
// e[k] = T(k+1, k). When q is non-null it receives the accumulated Q; when
// reflectors is non-null the individual reflectors are kept instead.
template <typename T>
void tridiagonalize(Matrix<T>& a, std::vector<double>& d, std::vector<T>& e, Matrix<T>* q,
                    std::vector<Reflector<T>>* reflectors) {
  const std::size_t n = a.rows();
  d.assign(n, 0.0);
  e.assign(n > 0 ? n - 1 : 0, T{});
  std::vector<T> w(n), p(n);

  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t base = k + 1;
    const std::size_t len = n - base;
    double tail = 0.0;
    for (std::size_t i = 1; i < len; ++i) tail += abs2_of(a(base + i, k));
    if (tail == 0.0) continue;

    const T x0 = a(base, k);
    const double ax0 = abs_of(x0);
    const double alpha = std::sqrt(tail + ax0 * ax0);
    const T phase = unit_phase(x0);
    // Reflector H = I - w w^H / h maps x onto -phase * alpha * e1.
    w[0] = x0 + phase * alpha;
    for (std::size_t i = 1; i < len; ++i) w[i] = a(base + i, k);
    const double h = alpha * (alpha + ax0);

    for (std::size_t i = 0; i < len; ++i) {
      T acc{};
      auto row = a.row(base + i);
      for (std::size_t j = 0; j < len; ++j) acc += row[base + j] * w[j];
      p[i] = acc / h;
    }
    T wp{};
    for (std::size_t i = 0; i < len; ++i) wp += conj_of(w[i]) * p[i];
    const double kk = real_of(wp) / (2.0 * h);
    for (std::size_t i = 0; i < len; ++i) p[i] -= kk * w[i];
    for (std::size_t i = 0; i < len; ++i) {
      auto row = a.row(base + i);
      const T wi = w[i];
      const T pi = p[i];
      for (std::size_t j = 0; j < len; ++j) {
        row[base + j] -= wi * conj_of(p[j]) + pi * conj_of(w[j]);
      }
    }
    const T sub = -phase * alpha;
    a(base, k) = sub;
    a(k, base) = conj_of(sub);
    for (std::size_t i = 1; i < len; ++i) {
      a(base + i, k) = T{};
      a(k, base + i) = T{};
    }

    if (reflectors != nullptr) {
      reflectors->push_back({base, h, std::vector<T>(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(len))});
    }
    if (q != nullptr) {
      for (std::size_t r = 0; r < n; ++r) {
        auto row = q->row(r);
        T s{};
        for (std::size_t j = 0; j < len; ++j) s += row[base + j] * w[j];
        s /= h;
        for (std::size_t j = 0; j < len; ++j) row[base + j] -= s * conj_of(w[j]);
      }
    }
  }
  for (std::size_t k = 0; k < n; ++k) d[k] = real_of(a(k, k));
  for (std::size_t k = 0; k + 1 < n; ++k) e[k] = a(k + 1, k);
}

// Implicit-shift QL on a real symmetric tridiagonal matrix (EISPACK tql2
// lineage). On entry sub[i] holds T(i, i-1) for i >= 1. If zt is non-null it
// must hold an n x n matrix whose ROWS are rotated along with the iteration,
// so rows of the result are eigenvectors.
int tridiagonal_ql(std::vector<double>& d, std::vector<double>& sub, RealMatrix* zt, int max_iter) {
  const std::size_t n = d.size();
  if (n == 0) return 0;
  std::vector<double> e(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = sub[i];
  e[n - 1] = 0.0;

  const double eps = std::numeric_limits<double>::epsilon();
  double f = 0.0;
  double tst1 = 0.0;
  int total = 0;
  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    std::size_t m = l;
    while (m < n) {
      if (std::abs(e[m]) <= eps * tst1) break;
      ++m;
    }
    if (m > l) {
      int iter = 0;
      do {
        if (++iter > max_iter) {
          throw Error(ErrorCode::kNoConvergence, "tridiagonal QL iteration limit exceeded");
        }
        ++total;
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (std::size_t ii = m; ii-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[ii];
          h = c * p;
          r = std::hypot(p, e[ii]);
          e[ii + 1] = s * r;
          s = e[ii] / r;
          c = p / r;
          p = c * d[ii] - s * g;
          d[ii + 1] = h + s * (c * g + s * d[ii]);
          if (zt != nullptr) {
            auto lo = zt->row(ii);
            auto hi = zt->row(ii + 1);
            for (std::size_t k = 0; k < n; ++k) {
              const double t = hi[k];
              hi[k] = s * lo[k] + c * t;
              lo[k] = c * lo[k] - s * t;
            }
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
  return total;
}

// Solves (T - shift I) x = b in place for the symmetric tridiagonal T with
// diagonal d and couplings sub[i] = T(i, i-1), using LU with partial
// pivoting. Zero pivots are nudged to `tiny` so near-singular shifts still
// produce a usable direction.
void shifted_tridiagonal_solve(const std::vector<double>& d, const std::vector<double>& sub, double shift,
                               double tiny, std::vector<double>& b) {
  const std::size_t n = d.size();
  std::vector<double> dd(n), dl(n, 0.0), du(n, 0.0), du2(n, 0.0);
  std::vector<char> swapped(n, 0);
  for (std::size_t i = 0; i < n; ++i) dd[i] = d[i] - shift;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    dl[i] = sub[i + 1];
    du[i] = sub[i + 1];
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(dd[i]) >= std::abs(dl[i])) {
      if (dd[i] == 0.0) dd[i] = tiny;
      const double fact = dl[i] / dd[i];
      dl[i] = fact;
      dd[i + 1] -= fact * du[i];
    } else {
      const double fact = dd[i] / dl[i];
      dd[i] = dl[i];
      dl[i] = fact;
      const double tmp = du[i];
      du[i] = dd[i + 1];
      dd[i + 1] = tmp - fact * dd[i + 1];
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -fact * du[i + 1];
      }
      swapped[i] = 1;
    }
  }
  if (n > 0 && dd[n - 1] == 0.0) dd[n - 1] = tiny;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (swapped[i]) std::swap(b[i], b[i + 1]);
    b[i + 1] -= dl[i] * b[i];
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    if (i + 1 < n) s -= du[i] * b[i + 1];
    if (i + 2 < n) s -= du2[i] * b[i + 2];
    b[i] = s / dd[i];
  }
}

// Eigenvectors of the real tridiagonal (d, sub) for the given eigenvalues by
// inverse iteration, orthogonalized against each other.
std::vector<std::vector<double>> tridiagonal_vectors(const std::vector<double>& d, const std::vector<double>& sub,
                                                     const std::vector<double>& values) {
  const std::size_t n = d.size();
  double tnorm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    tnorm = std::max(tnorm, std::abs(d[i]) + std::abs(sub[i]) + (i + 1 < n ? std::abs(sub[i + 1]) : 0.0));
  }
  if (tnorm == 0.0) tnorm = 1.0;
  const double eps = std::numeric_limits<double>::epsilon();
  const double tiny = eps * tnorm;
  std::vector<std::vector<double>> out;
  for (double lambda : values) {
    std::vector<double> x;
    // Start vectors: a smooth one with no special alignment, then the
    // standard basis if an iterate collapses onto earlier vectors.
    for (std::size_t attempt = 0; attempt <= n; ++attempt) {
      x.assign(n, 0.0);
      if (attempt == 0) {
        for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 0.5 * std::sin(1.0 + 0.7 * static_cast<double>(i));
      } else {
        x[(attempt - 1 + out.size()) % n] = 1.0;
      }
      bool collapsed = false;
      for (int it = 0; it < 4 && !collapsed; ++it) {
        shifted_tridiagonal_solve(d, sub, lambda, tiny, x);
        double before = 0.0;
        for (double v : x) before += v * v;
        for (int pass = 0; pass < 2; ++pass) {
          for (const auto& prev : out) {
            double proj = 0.0;
            for (std::size_t i = 0; i < n; ++i) proj += prev[i] * x[i];
            for (std::size_t i = 0; i < n; ++i) x[i] -= proj * prev[i];
          }
        }
        double nrm = 0.0;
        for (double v : x) nrm += v * v;
        collapsed = !std::isfinite(nrm) || !(nrm > 1e-20 * before);
        if (!collapsed) {
          nrm = std::sqrt(nrm);
          for (double& v : x) v /= nrm;
        }
      }
      if (!collapsed) break;
      if (attempt == n) throw Error(ErrorCode::kNoConvergence, "inverse iteration broke down");
    }
    out.push_back(std::move(x));
  }
  return out;
}

template <typename T>
EigenResult<T> householder_ql(Matrix<T> a, const EigenOptions& opt) {
  const std::size_t n = a.rows();
  const std::size_t want = opt.compute_vectors ? std::min(n, opt.max_vectors) : 0;
  const bool full = want == n && n > 0;
  EigenResult<T> res;
  Matrix<T> q;
  if (full) q = Matrix<T>::identity(n);
  std::vector<Reflector<T>> reflectors;

  std::vector<double> d;
  std::vector<T> e;
  tridiagonalize(a, d, e, full ? &q : nullptr, (want > 0 && !full) ? &reflectors : nullptr);

  // Diagonal unitary D makes the subdiagonal real: T' = D^H T D.
  std::vector<T> phase(n, T(1.0));
  std::vector<double> sub(n, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    sub[k + 1] = abs_of(e[k]);
    phase[k + 1] = phase[k] * unit_phase(e[k]);
  }

  if (full) {
    RealMatrix zt = RealMatrix::identity(n);
    res.iterations = tridiagonal_ql(d, sub, &zt, opt.tol.ql_max_iterations);
    res.values = std::move(d);
    // Eigenvectors of A are Q D z.
    for (std::size_t r = 0; r < n; ++r) {
      auto qrow = q.row(r);
      for (std::size_t k = 0; k < n; ++k) qrow[k] *= phase[k];
    }
    Matrix<T> v(n, n);
    for (std::size_t r = 0; r < n; ++r) {
      auto qrow = q.row(r);
      auto vrow = v.row(r);
      for (std::size_t c = 0; c < n; ++c) {
        auto z = zt.row(c);
        T acc{};
        for (std::size_t k = 0; k < n; ++k) acc += qrow[k] * z[k];
        vrow[c] = acc;
      }
    }
    res.vectors = std::move(v);
    sort_descending(res);
    return res;
  }

  std::vector<double> values = d;
  std::vector<double> sub_copy = sub;
  res.iterations = tridiagonal_ql(values, sub_copy, nullptr, opt.tol.ql_max_iterations);
  std::sort(values.begin(), values.end(), std::greater<>());
  res.values = values;
  if (want == 0) return res;

  values.resize(want);
  const auto zs = tridiagonal_vectors(d, sub, values);
  Matrix<T> v(n, want);
  std::vector<T> y(n);
  for (std::size_t c = 0; c < want; ++c) {
    for (std::size_t i = 0; i < n; ++i) y[i] = phase[i] * zs[c][i];
    // Q = H_0 H_1 ... so apply the last reflector first.
    for (auto it = reflectors.rbegin(); it != reflectors.rend(); ++it) {
      T s{};
      for (std::size_t j = 0; j < it->w.size(); ++j) s += conj_of(it->w[j]) * y[it->base + j];
      s /= it->h;
      for (std::size_t j = 0; j < it->w.size(); ++j) y[it->base + j] -= it->w[j] * s;
    }
    for (std::size_t i = 0; i < n; ++i) v(i, c) = y[i];
  }
  res.vectors = std::move(v);
  return res;
}

template <typename T>
EigenResult<T> solve(const Matrix<T>& a, const EigenOptions& opt) {
  require_hermitian(a, opt.tol);
  if (opt.method == EigenMethod::kTridiagonalQL) return householder_ql(a, opt);
  EigenResult<T> res = jacobi(a, opt);
  sort_descending(res);
  const std::size_t n = a.rows();
  const std::size_t want = std::min(n, opt.max_vectors);
  if (opt.compute_vectors && want < n) {
    Matrix<T> v(n, want);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < want; ++c) v(r, c) = res.vectors(r, c);
    res.vectors = std::move(v);
  }
  return res;
}

}  // namespace

EigenResult<double> hermitian_eig(const RealMatrix& a, const EigenOptions& options) {
  return solve(a, options);
}

EigenResult<Complex> hermitian_eig(const ComplexMatrix& a, const EigenOptions& options) {
  return solve(a, options);
}

}  // namespace qdsmds::quatlin
