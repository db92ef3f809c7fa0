#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "qdsmds/error.hpp"
#include "qdsmds/quatlin/dense.hpp"
#include "qdsmds/quatlin/hermitian_eig.hpp"
#include "qdsmds/quatlin/qsvd.hpp"
#include "test_support.hpp"

using namespace qdsmds;
using namespace qdsmds::quatlin;
using namespace qdsmds::testing;

namespace {

bool quat_near(const Quaternion& a, const Quaternion& b, double tol) { return norm(a - b) <= tol; }

template <typename T>
Matrix<T> reconstruct(const EigenResult<T>& r) {
  const std::size_t n = r.vectors.rows();
  Matrix<T> out(n, n);
  for (std::size_t k = 0; k < r.values.size(); ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out(i, j) += r.vectors(i, k) * conj_of(r.vectors(j, k)) * r.values[k];
  return out;
}

template <typename T>
double orthonormality_error(const Matrix<T>& v) {
  auto g = conj_transpose(v) * v;
  return max_abs_diff(g, Matrix<T>::identity(v.cols()));
}

}  // namespace

TEST_SUITE("quaternion") {
  TEST_CASE("unit products follow ijk = -1") {
    const auto i = Quaternion::i(), j = Quaternion::j(), k = Quaternion::k();
    CHECK(i * j == k);
    CHECK(j * k == i);
    CHECK(k * i == j);
    CHECK(j * i == -k);
    CHECK(i * i == Quaternion(-1.0));
    CHECK(j * j == Quaternion(-1.0));
    CHECK(k * k == Quaternion(-1.0));
    CHECK(i * j * k == Quaternion(-1.0));
  }

  TEST_CASE("identity and hand-expanded conjugate product") {
    const Quaternion q{1.0, 2.0, 3.0, 0.0};
    CHECK(qmul(q, Quaternion(1.0)) == q);
    CHECK(qmul(q, conj(q)) == Quaternion(14.0, 0.0, 0.0, 0.0));
    CHECK(qmul(conj(q), q) == Quaternion(14.0, 0.0, 0.0, 0.0));
  }

  TEST_CASE("norm is non-negative and zero only at zero") {
    CHECK(norm(Quaternion{}) == 0.0);
    CHECK(norm(Quaternion{0, 0, 0, 1e-300}) > 0.0);
    CHECK(norm(Quaternion{1, 2, 2, 4}) == doctest::Approx(5.0));
  }

  TEST_CASE("norm is multiplicative over random pairs") {
    std::mt19937_64 g(7);
    double worst = 0.0;
    for (int t = 0; t < 10000; ++t) {
      const auto a = random_quat(g) * std::exp(uniform(g, -5.0, 5.0));
      const auto b = random_quat(g) * std::exp(uniform(g, -5.0, 5.0));
      const double ref = norm(a) * norm(b);
      worst = std::max(worst, std::abs(norm(a * b) - ref) / ref);
    }
    CHECK(worst < 1e-12);
  }

  TEST_CASE("complex pair split round-trips") {
    const Quaternion q{1.5, -2.0, 0.25, 4.0};
    CHECK(Quaternion::from_complex_pair(q.simplex(), q.perplex()) == q);
    // q = simplex + perplex * j with complex numbers embedded as w + x i.
    const Quaternion a{q.w, q.x, 0, 0}, b{q.y, q.z, 0, 0};
    CHECK(quat_near(a + b * Quaternion::j(), q, 1e-15));
  }
}

TEST_SUITE("adjoint") {
  TEST_CASE("scalar embeddings") {
    QuatMatrix one(1, 1, Quaternion(1.0));
    const auto a1 = to_adjoint(one);
    CHECK(a1 == ComplexMatrix::identity(2));

    QuatMatrix jm(1, 1, Quaternion::j());
    const auto aj = to_adjoint(jm);
    CHECK(aj(0, 0) == Complex(0, 0));
    CHECK(aj(0, 1) == Complex(1, 0));
    CHECK(aj(1, 0) == Complex(-1, 0));
    CHECK(aj(1, 1) == Complex(0, 0));
  }

  TEST_CASE("block layout of a rectangular matrix") {
    std::mt19937_64 g(3);
    const auto q = random_quat_matrix(g, 2, 3);
    const auto a = to_adjoint(q);
    REQUIRE(a.rows() == 4);
    REQUIRE(a.cols() == 6);
    for (std::size_t r = 0; r < 2; ++r)
      for (std::size_t c = 0; c < 3; ++c) {
        const Complex A = q(r, c).simplex(), B = q(r, c).perplex();
        CHECK(a(r, c) == A);
        CHECK(a(r, c + 3) == B);
        CHECK(a(r + 2, c) == -std::conj(B));
        CHECK(a(r + 2, c + 3) == std::conj(A));
      }
  }

  TEST_CASE("homomorphism on random products") {
    std::mt19937_64 g(11);
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
      const auto a = random_quat_matrix(g, 3, 3);
      const auto b = random_quat_matrix(g, 3, 3);
      worst = std::max(worst, max_abs_diff(to_adjoint(naive_product(a, b)),
                                           naive_product(to_adjoint(a), to_adjoint(b))));
    }
    CHECK(worst < 1e-12);
  }

  TEST_CASE("rectangular homomorphism and library product") {
    std::mt19937_64 g(12);
    const auto a = random_quat_matrix(g, 2, 4);
    const auto b = random_quat_matrix(g, 4, 3);
    CHECK(max_abs_diff(a * b, naive_product(a, b)) < 1e-14);
    CHECK(max_abs_diff(to_adjoint(a * b), to_adjoint(a) * to_adjoint(b)) < 1e-12);
  }

  TEST_CASE("conjugate transpose commutes with the embedding") {
    std::mt19937_64 g(13);
    for (int t = 0; t < 20; ++t) {
      const auto q = random_quat_matrix(g, 3, 5);
      CHECK(to_adjoint(conj_transpose(q)) == conj_transpose(to_adjoint(q)));
    }
  }

  TEST_CASE("hermitian quaternion matrices embed as hermitian complex matrices") {
    std::mt19937_64 g(14);
    const auto k = random_hermitian_quat(g, 6);
    CHECK(is_hermitian(k, 0.0));
    CHECK(is_hermitian(to_adjoint(k), 0.0));
    for (std::size_t r = 0; r < 6; ++r) {
      CHECK(k(r, r).x == 0.0);
      CHECK(k(r, r).y == 0.0);
      CHECK(k(r, r).z == 0.0);
    }
  }
}

TEST_SUITE("hermitian_eig") {
  TEST_CASE("identity") {
    for (auto method : {EigenMethod::kTridiagonalQL, EigenMethod::kJacobi}) {
      EigenOptions o;
      o.method = method;
      const auto r = hermitian_eig(RealMatrix::identity(4), o);
      REQUIRE(r.values.size() == 4);
      for (double v : r.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
    }
  }

  TEST_CASE("diagonal input keeps the standard basis") {
    RealMatrix a(2, 2);
    a(0, 0) = 3.0;
    a(1, 1) = 1.0;
    for (auto method : {EigenMethod::kTridiagonalQL, EigenMethod::kJacobi}) {
      EigenOptions o;
      o.method = method;
      const auto r = hermitian_eig(a, o);
      CHECK(r.values[0] == doctest::Approx(3.0));
      CHECK(r.values[1] == doctest::Approx(1.0));
      CHECK(std::abs(r.vectors(0, 0)) == doctest::Approx(1.0));
      CHECK(std::abs(r.vectors(1, 1)) == doctest::Approx(1.0));
      CHECK(std::abs(r.vectors(0, 1)) < 1e-14);
    }
  }

  TEST_CASE("trace identity and reconstruction, complex") {
    std::mt19937_64 g(21);
    for (auto method : {EigenMethod::kTridiagonalQL, EigenMethod::kJacobi}) {
      for (std::size_t n : {1u, 2u, 3u, 10u, 40u}) {
        const auto a = random_hermitian_complex(g, n);
        EigenOptions o;
        o.method = method;
        const auto r = hermitian_eig(a, o);
        double tr = 0.0;
        for (std::size_t i = 0; i < n; ++i) tr += a(i, i).real();
        const double sum = std::accumulate(r.values.begin(), r.values.end(), 0.0);
        CHECK(std::abs(sum - tr) <= 1e-10 * std::max(1.0, std::abs(tr)));
        CHECK(std::is_sorted(r.values.rbegin(), r.values.rend()));
        CHECK(frobenius_norm(reconstruct(r) - a) / frobenius_norm(a) < 1e-10);
        CHECK(orthonormality_error(r.vectors) < 1e-10);
      }
    }
  }

  TEST_CASE("residual A v = lambda v, real") {
    std::mt19937_64 g(22);
    const auto a = random_symmetric(g, 25);
    const auto r = hermitian_eig(a);
    const auto av = a * r.vectors;
    double worst = 0.0;
    for (std::size_t k = 0; k < 25; ++k)
      for (std::size_t i = 0; i < 25; ++i) worst = std::max(worst, std::abs(av(i, k) - r.values[k] * r.vectors(i, k)));
    CHECK(worst < 1e-10 * frobenius_norm(a));
  }

  TEST_CASE("QL and Jacobi agree on the spectrum") {
    std::mt19937_64 g(23);
    const auto a = to_adjoint(random_hermitian_quat(g, 12));
    EigenOptions jac;
    jac.method = EigenMethod::kJacobi;
    const auto r1 = hermitian_eig(a);
    const auto r2 = hermitian_eig(a, jac);
    for (std::size_t k = 0; k < r1.values.size(); ++k) CHECK(r1.values[k] == doctest::Approx(r2.values[k]).epsilon(1e-10));
  }

  TEST_CASE("partial eigenvectors match the leading columns of the full basis") {
    std::mt19937_64 g(24);
    const auto a = random_hermitian_complex(g, 30);
    EigenOptions part;
    part.max_vectors = 3;
    const auto full = hermitian_eig(a);
    const auto top = hermitian_eig(a, part);
    REQUIRE(top.vectors.cols() == 3);
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(top.values[k] == doctest::Approx(full.values[k]).epsilon(1e-12));
      Complex overlap{};
      for (std::size_t i = 0; i < 30; ++i) overlap += std::conj(full.vectors(i, k)) * top.vectors(i, k);
      CHECK(std::abs(overlap) == doctest::Approx(1.0).epsilon(1e-10));
    }
    CHECK(orthonormality_error(top.vectors) < 1e-10);
  }

  TEST_CASE("values only") {
    EigenOptions o;
    o.compute_vectors = false;
    std::mt19937_64 g(25);
    const auto r = hermitian_eig(random_symmetric(g, 8), o);
    CHECK(r.values.size() == 8);
    CHECK(r.vectors.size() == 0);
  }

  TEST_CASE("non-hermitian input is rejected") {
    RealMatrix a(2, 2);
    a(0, 1) = 1.0;
    CHECK_THROWS_AS(hermitian_eig(a), Error);
    try {
      hermitian_eig(a);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kNotHermitian);
    }
    ComplexMatrix c(2, 2);
    c(0, 1) = Complex(0, 1);
    c(1, 0) = Complex(0, 1);
    CHECK_THROWS_AS(hermitian_eig(c), Error);
  }

  TEST_CASE("sweep limit reports non-convergence") {
    std::mt19937_64 g(26);
    EigenOptions o;
    o.method = EigenMethod::kJacobi;
    o.tol.jacobi_max_sweeps = 1;
    const auto a = random_hermitian_complex(g, 20);
    try {
      hermitian_eig(a, o);
      FAIL("expected kNoConvergence");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kNoConvergence);
    }
  }
}

TEST_SUITE("qsvd") {
  TEST_CASE("adjoint eigenvalues come in equal pairs") {
    std::mt19937_64 g(31);
    for (int t = 0; t < 10; ++t) {
      const auto k = random_hermitian_quat(g, 8);
      const auto r = hermitian_eig(to_adjoint(k));
      const double scale = std::max(std::abs(r.values.front()), std::abs(r.values.back()));
      for (std::size_t p = 0; p < 8; ++p) CHECK(std::abs(r.values[2 * p] - r.values[2 * p + 1]) < 1e-9 * scale);
      CHECK(qsvd_dominant(k).pairing_gap < 1e-9);
    }
  }

  TEST_CASE("rank-one kernel of (1, i, j)") {
    QuatMatrix nu(3, 1);
    nu(0, 0) = Quaternion(1.0);
    nu(1, 0) = Quaternion::i();
    nu(2, 0) = Quaternion::j();
    const auto k = nu * conj_transpose(nu);
    const auto d = qsvd_dominant(k);
    CHECK(d.sigma1 == doctest::Approx(3.0).epsilon(1e-14));
    REQUIRE(d.singular_values.size() == 3);
    CHECK(d.singular_values[1] < 1e-14);
    CHECK(d.singular_values[2] < 1e-14);
    // sigma1 u1 u1^H reproduces K.
    QuatMatrix u(3, 1);
    for (std::size_t i = 0; i < 3; ++i) u(i, 0) = d.u1[i];
    CHECK(max_abs_diff(u * conj_transpose(u) * d.sigma1, k) < 1e-13);
    double n2 = 0.0;
    for (const auto& q : d.u1) n2 += norm2(q);
    CHECK(n2 == doctest::Approx(1.0));
  }

  TEST_CASE("zero kernel") {
    const auto d = qsvd_dominant(QuatMatrix(4, 4));
    CHECK(d.sigma1 == 0.0);
    CHECK(d.singular_values.size() == 4);
  }

  TEST_CASE("dominant pair of a random hermitian kernel is a right eigenpair") {
    std::mt19937_64 g(32);
    for (int t = 0; t < 10; ++t) {
      const auto k = random_hermitian_quat(g, 7);
      const auto d = qsvd_dominant(k);
      QuatMatrix u(7, 1);
      for (std::size_t i = 0; i < 7; ++i) u(i, 0) = d.u1[i];
      const auto ku = k * u;
      for (std::size_t i = 0; i < 7; ++i) CHECK(quat_near(ku(i, 0), u(i, 0) * d.eigenvalue1, 1e-10 * d.sigma1));
      CHECK(d.sigma1 == doctest::Approx(std::abs(d.eigenvalue1)));
      CHECK(d.sigma1 == doctest::Approx(d.singular_values[0]));
    }
  }

  TEST_CASE("full reconstruction from every right eigenpair") {
    // Sum of lambda_p u_p u_p^H over all pairs, reassembled from one
    // adjoint eigenvector per pair, reproduces K.
    std::mt19937_64 g(33);
    const auto k = random_hermitian_quat(g, 6);
    const auto r = hermitian_eig(to_adjoint(k));
    QuatMatrix sum(6, 6);
    for (std::size_t p = 0; p < 6; ++p) {
      const auto col = quaternion_column_from_adjoint(r.vectors, 2 * p);
      QuatMatrix u(6, 1);
      double n2 = 0.0;
      for (std::size_t i = 0; i < 6; ++i) {
        u(i, 0) = col[i];
        n2 += norm2(col[i]);
      }
      sum += u * conj_transpose(u) * (r.values[2 * p] / n2);
    }
    CHECK(frobenius_norm(sum - k) / frobenius_norm(k) < 1e-9);
  }

  TEST_CASE("singular values are sorted magnitudes of the right eigenvalues") {
    std::mt19937_64 g(34);
    const auto k = random_hermitian_quat(g, 9);
    const auto d = qsvd_dominant(k);
    const auto r = hermitian_eig(to_adjoint(k));
    std::vector<double> mags;
    for (std::size_t p = 0; p < 9; ++p) mags.push_back(std::abs(r.values[2 * p]));
    std::sort(mags.rbegin(), mags.rend());
    for (std::size_t p = 0; p < 9; ++p) CHECK(d.singular_values[p] == doctest::Approx(mags[p]).epsilon(1e-9));
  }

  TEST_CASE("negative dominant eigenvalue") {
    QuatMatrix nu(2, 1);
    nu(0, 0) = Quaternion{1, 1, 0, 0};
    nu(1, 0) = Quaternion{0, 0, 2, 0};
    const auto k = nu * conj_transpose(nu) * -1.0;
    const auto d = qsvd_dominant(k);
    CHECK(d.sigma1 == doctest::Approx(6.0));
    CHECK(d.eigenvalue1 == doctest::Approx(-6.0));
  }

  TEST_CASE("non-hermitian input") {
    std::mt19937_64 g(35);
    const auto k = random_quat_matrix(g, 4, 4);
    try {
      qsvd_dominant(k);
      FAIL("expected kNotHermitian");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kNotHermitian);
    }
    QsvdOptions o;
    o.hermitian = false;
    const auto d = qsvd_dominant(k, o);
    // sigma1^2 is the top eigenvalue of K K^H.
    const auto kk = hermitian_eig(to_adjoint(k * conj_transpose(k)));
    CHECK(d.sigma1 * d.sigma1 == doctest::Approx(kk.values[0]).epsilon(1e-10));
  }
}

TEST_SUITE("dense") {
  TEST_CASE("svd reconstructs and orders") {
    std::mt19937_64 g(41);
    RealMatrix a(7, 4);
    for (auto& v : a.data()) v = uniform(g);
    const auto s = svd_jacobi(a);
    CHECK(std::is_sorted(s.s.rbegin(), s.s.rend()));
    RealMatrix us = s.u;
    for (std::size_t r = 0; r < us.rows(); ++r)
      for (std::size_t c = 0; c < us.cols(); ++c) us(r, c) *= s.s[c];
    CHECK(max_abs_diff(us * transpose(s.v), a) < 1e-13);
    CHECK(max_abs_diff(transpose(s.v) * s.v, RealMatrix::identity(4)) < 1e-13);
  }

  TEST_CASE("numerical rank") {
    RealMatrix a(4, 3);
    a(0, 0) = 1;
    a(1, 1) = 1;
    a(2, 0) = 1;
    a(2, 1) = 1;
    CHECK(numerical_rank(a) == 2);
    a(3, 2) = 1e-3;
    CHECK(numerical_rank(a) == 3);
  }

  TEST_CASE("least squares solves consistent and overdetermined systems") {
    std::mt19937_64 g(42);
    RealMatrix a(9, 4), x(4, 2);
    for (auto& v : a.data()) v = uniform(g);
    for (auto& v : x.data()) v = uniform(g);
    CHECK(max_abs_diff(least_squares(a, a * x), x) < 1e-12);

    RealMatrix b(9, 1);
    for (auto& v : b.data()) v = uniform(g);
    const auto sol = least_squares(a, b);
    // Normal equations: A^T (A x - b) = 0.
    CHECK(max_abs(transpose(a) * (a * sol - b)) < 1e-12);

    RealMatrix singular(3, 2);
    singular(0, 0) = singular(1, 0) = singular(2, 0) = 1.0;
    CHECK_THROWS_AS(least_squares(singular, RealMatrix(3, 1)), Error);
  }

  TEST_CASE("orthogonal procrustes recovers rotations and reflections") {
    std::mt19937_64 g(43);
    RealMatrix a(10, 3);
    for (auto& v : a.data()) v = uniform(g);
    RealMatrix m(3, 3);
    for (auto& v : m.data()) v = uniform(g);
    const auto q = svd_jacobi(m);
    const RealMatrix rot = q.u * transpose(q.v);
    CHECK(max_abs_diff(orthogonal_procrustes(a, a * rot), rot) < 1e-12);
    RealMatrix flip = RealMatrix::identity(3);
    flip(2, 2) = -1.0;
    CHECK(max_abs_diff(orthogonal_procrustes(a, a * flip), flip) < 1e-12);
    CHECK_THROWS_AS(orthogonal_procrustes(RealMatrix(10, 3), a), Error);
  }
}
