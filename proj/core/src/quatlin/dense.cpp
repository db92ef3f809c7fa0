#include "qdsmds/quatlin/dense.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace qdsmds::quatlin {

SvdResult svd_jacobi(const RealMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (m < n) throw Error(ErrorCode::kShapeMismatch, "svd_jacobi expects rows >= cols");

  RealMatrix u = a;
  RealMatrix v = RealMatrix::identity(n);
  const double eps = std::numeric_limits<double>::epsilon();
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t r = 0; r < m; ++r) {
          alpha += u(r, p) * u(r, p);
          beta += u(r, q) * u(r, q);
          gamma += u(r, p) * u(r, q);
        }
        if (std::abs(gamma) <= eps * std::sqrt(alpha * beta) || gamma == 0.0) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t r = 0; r < m; ++r) {
          const double x = u(r, p);
          const double y = u(r, q);
          u(r, p) = c * x - s * y;
          u(r, q) = s * x + c * y;
        }
        for (std::size_t r = 0; r < n; ++r) {
          const double x = v(r, p);
          const double y = v(r, q);
          v(r, p) = c * x - s * y;
          v(r, q) = s * x + c * y;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> s(n);
  for (std::size_t c = 0; c < n; ++c) {
    double acc = 0.0;
    for (std::size_t r = 0; r < m; ++r) acc += u(r, c) * u(r, c);
    s[c] = std::sqrt(acc);
  }
  const double smax = n > 0 ? *std::max_element(s.begin(), s.end()) : 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    if (s[c] > eps * smax && s[c] > 0.0) {
      for (std::size_t r = 0; r < m; ++r) u(r, c) /= s[c];
    } else {
      for (std::size_t r = 0; r < m; ++r) u(r, c) = 0.0;
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return s[x] > s[y]; });
  SvdResult out{RealMatrix(m, n), std::vector<double>(n), RealMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.s[k] = s[order[k]];
    for (std::size_t r = 0; r < m; ++r) out.u(r, k) = u(r, order[k]);
    for (std::size_t r = 0; r < n; ++r) out.v(r, k) = v(r, order[k]);
  }
  return out;
}

std::size_t numerical_rank(const RealMatrix& a, double rel_tol) {
  const SvdResult svd = a.rows() >= a.cols() ? svd_jacobi(a) : svd_jacobi(transpose(a));
  if (svd.s.empty() || svd.s.front() == 0.0) return 0;
  return static_cast<std::size_t>(
      std::count_if(svd.s.begin(), svd.s.end(), [&](double v) { return v > rel_tol * svd.s.front(); }));
}

RealMatrix least_squares(const RealMatrix& a, const RealMatrix& b) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (b.rows() != m) throw Error(ErrorCode::kShapeMismatch, "least_squares: row count mismatch");
  if (m < n) throw Error(ErrorCode::kSingularSystem, "least_squares: underdetermined system");

  RealMatrix r = a;
  RealMatrix rhs = b;
  const std::size_t nrhs = b.cols();
  double rmax = 0.0;
  std::vector<double> w(m);
  for (std::size_t k = 0; k < n; ++k) {
    double norm2 = 0.0;
    for (std::size_t i = k; i < m; ++i) norm2 += r(i, k) * r(i, k);
    const double norm = std::sqrt(norm2);
    if (norm == 0.0) continue;
    const double alpha = r(k, k) > 0.0 ? -norm : norm;
    for (std::size_t i = k; i < m; ++i) w[i] = r(i, k);
    w[k] -= alpha;
    const double wnorm2 = norm2 - r(k, k) * r(k, k) + w[k] * w[k];
    for (std::size_t c = k; c < n; ++c) {
      double s = 0.0;
      for (std::size_t i = k; i < m; ++i) s += w[i] * r(i, c);
      s = 2.0 * s / wnorm2;
      for (std::size_t i = k; i < m; ++i) r(i, c) -= s * w[i];
    }
    for (std::size_t c = 0; c < nrhs; ++c) {
      double s = 0.0;
      for (std::size_t i = k; i < m; ++i) s += w[i] * rhs(i, c);
      s = 2.0 * s / wnorm2;
      for (std::size_t i = k; i < m; ++i) rhs(i, c) -= s * w[i];
    }
    rmax = std::max(rmax, std::abs(r(k, k)));
  }

  RealMatrix x(n, nrhs);
  for (std::size_t k = n; k-- > 0;) {
    const double diag = r(k, k);
    if (std::abs(diag) <= 1e-12 * rmax || diag == 0.0) {
      throw Error(ErrorCode::kSingularSystem, "least_squares: matrix is rank deficient");
    }
    for (std::size_t c = 0; c < nrhs; ++c) {
      double s = rhs(k, c);
      for (std::size_t j = k + 1; j < n; ++j) s -= r(k, j) * x(j, c);
      x(k, c) = s / diag;
    }
  }
  return x;
}

RealMatrix orthogonal_procrustes(const RealMatrix& a, const RealMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::kShapeMismatch, "orthogonal_procrustes: shape mismatch");
  }
  const SvdResult svd = svd_jacobi(transpose(a) * b);
  const std::size_t n = a.cols();
  if (n == 0 || svd.s.back() <= kDefaultTolerances.rank_rel * svd.s.front()) {
    throw Error(ErrorCode::kRankDeficient, "orthogonal_procrustes: cross-covariance is singular");
  }
  return svd.u * transpose(svd.v);
}

}  // namespace qdsmds::quatlin
