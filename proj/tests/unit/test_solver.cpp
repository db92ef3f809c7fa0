#include <doctest.h>

#include "qdsmds/kernel.hpp"
#include "qdsmds/netgeom.hpp"
#include "qdsmds/quatlin/dense.hpp"
#include "qdsmds/quatlin/hermitian_eig.hpp"
#include "qdsmds/solver.hpp"
#include "test_support.hpp"

using namespace qdsmds;
using namespace qdsmds::solver;
using namespace qdsmds::testing;

namespace {

struct Setup {
  netgeom::NetworkLayout layout;
  netgeom::EdgeSet edges;
  netgeom::TrueEdges truth;
};

Setup make_setup(std::uint64_t seed, std::size_t num_targets = 15) {
  std::mt19937_64 g(seed);
  netgeom::NetworkLayout layout(reference_anchors(), random_targets(g, num_targets));
  auto edges = netgeom::enumerate_edges(layout.num_anchors(), layout.num_targets());
  auto truth = netgeom::true_edges(layout, edges);
  return {std::move(layout), std::move(edges), std::move(truth)};
}

quatlin::QuatMatrix outer(const std::vector<Quaternion>& nu) {
  quatlin::QuatMatrix k(nu.size(), nu.size());
  for (std::size_t a = 0; a < nu.size(); ++a)
    for (std::size_t b = 0; b < nu.size(); ++b) k(a, b) = nu[a] * quatlin::conj(nu[b]);
  return k;
}

RealMatrix random_rotation(std::mt19937_64& g) {
  RealMatrix m(3, 3);
  for (auto& v : m.data()) v = uniform(g);
  const auto s = quatlin::svd_jacobi(m);
  return s.u * transpose(s.v);
}

// All node coordinates of a setup, anchors first.
RealMatrix to_matrix_rows(const Setup& s) { return netgeom::to_matrix(s.layout.nodes()); }

}  // namespace

TEST_SUITE("estimators") {
  TEST_CASE("noiseless kernels are recovered exactly") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto s = make_setup(seed);
      const auto table = kernel::exact_observations(netgeom::to_points(s.truth.vectors));
      const auto real = smds_estimate(kernel::build_real_gek(table), s.layout, s.edges);
      const auto quat = qdsmds_estimate(kernel::build_quat_gek(table), s.layout, s.edges);
      CHECK(real.xi < 1e-6);
      CHECK(quat.xi < 1e-6);
      CHECK(quat.diagnostics.k_energy < 1e-9);
      CHECK(max_abs_diff(quat.v_hat, s.truth.vectors) < 1e-8);
      CHECK(real.x_hat.rows() == 15);

      double trace = 0.0;
      for (double d : real.diagnostics.spectrum) trace += d;
      for (std::size_t i = 3; i < real.diagnostics.spectrum.size(); ++i)
        CHECK(std::abs(real.diagnostics.spectrum[i]) <= 1e-9 * trace);
    }
  }

  TEST_CASE("procrustes option keeps noiseless recovery exact") {
    const auto s = make_setup(6);
    const auto table = kernel::exact_observations(netgeom::to_points(s.truth.vectors));
    SolverOptions o;
    o.procrustes = true;
    CHECK(smds_estimate(kernel::build_real_gek(table), s.layout, s.edges, o).xi < 1e-6);
    CHECK(qdsmds_estimate(kernel::build_quat_gek(table), s.layout, s.edges, o).xi < 1e-6);
  }

  TEST_CASE("Jacobi eigensolver gives the same estimate") {
    const auto s = make_setup(7, 6);
    const auto table = kernel::exact_observations(netgeom::to_points(s.truth.vectors));
    SolverOptions o;
    o.eigen.method = quatlin::EigenMethod::kJacobi;
    const auto a = qdsmds_estimate(kernel::build_quat_gek(table), s.layout, s.edges, o);
    const auto b = qdsmds_estimate(kernel::build_quat_gek(table), s.layout, s.edges);
    CHECK(max_abs_diff(a.x_hat, b.x_hat) < 1e-9);
    CHECK(smds_estimate(kernel::build_real_gek(table), s.layout, s.edges, o).xi < 1e-6);
  }

  TEST_CASE("scaling the quaternion kernel scales the edge estimate") {
    const auto s = make_setup(8);
    std::mt19937_64 g(8);
    auto k = outer(s.truth.quats);
    // Hermitian perturbation so the test is not purely noiseless.
    for (std::size_t a = 0; a < k.rows(); ++a)
      for (std::size_t b = a + 1; b < k.cols(); ++b) {
        k(a, b) += random_quat(g) * 5.0;
        k(b, a) = quatlin::conj(k(a, b));
      }
    const auto base = qdsmds_estimate(k, s.layout, s.edges);
    const double c = 2.25;
    const auto scaled = qdsmds_estimate(k * c, s.layout, s.edges);
    CHECK(max_abs_diff(scaled.v_hat, base.v_hat * std::sqrt(c)) < 1e-9 * quatlin::max_abs(base.v_hat));
  }

  TEST_CASE("quaternion kernel is gauge invariant") {
    const auto s = make_setup(9);
    std::mt19937_64 g(9);
    const auto q0 = random_unit_quat(g);
    std::vector<Quaternion> rotated = s.truth.quats;
    for (auto& v : rotated) v = v * q0;
    const auto k1 = outer(s.truth.quats);
    const auto k2 = outer(rotated);
    CHECK(max_abs_diff(k1, k2) <= 1e-12 * quatlin::max_abs(k1));
    const auto a = qdsmds_estimate(k1, s.layout, s.edges);
    const auto b = qdsmds_estimate(k2, s.layout, s.edges);
    CHECK(max_abs_diff(a.x_hat, b.x_hat) < 1e-9);
  }

  TEST_CASE("rank-deficient real kernel") {
    const auto s = make_setup(10);
    QDSMDS_CHECK_ERROR(smds_estimate(RealMatrix(s.edges.size(), s.edges.size()), s.layout, s.edges),
                       ErrorCode::kRankDeficient);
    QDSMDS_CHECK_ERROR(smds_estimate(RealMatrix(3, 3), s.layout, s.edges), ErrorCode::kShapeMismatch);
  }
}

TEST_SUITE("gauge") {
  TEST_CASE("synthetic right rotation is undone") {
    const auto s = make_setup(11);
    std::mt19937_64 g(11);
    const std::span<const Quaternion> aa(s.truth.quats.data(), s.edges.num_anchor_edges());
    for (int t = 0; t < 20; ++t) {
      const auto q0 = random_unit_quat(g);
      std::vector<Quaternion> hat = s.truth.quats;
      for (auto& v : hat) v = v * q0;
      const auto fixed = fix_quaternion_gauge(hat, aa);
      double worst = 0.0;
      for (std::size_t m = 0; m < hat.size(); ++m) worst = std::max(worst, quatlin::norm(fixed[m] - s.truth.quats[m]));
      CHECK(worst < 1e-10);
    }
  }

  TEST_CASE("identity gauge leaves the input unchanged") {
    const auto s = make_setup(12);
    const std::span<const Quaternion> aa(s.truth.quats.data(), s.edges.num_anchor_edges());
    const auto fixed = fix_quaternion_gauge(s.truth.quats, aa);
    for (std::size_t m = 0; m < fixed.size(); ++m) CHECK(quatlin::norm(fixed[m] - s.truth.quats[m]) < 1e-12);
  }

  TEST_CASE("the fix minimizes the anchor residual over unit quaternions") {
    const auto s = make_setup(13);
    std::mt19937_64 g(13);
    const std::size_t maa = s.edges.num_anchor_edges();
    const std::span<const Quaternion> aa(s.truth.quats.data(), maa);
    auto residual = [&](const std::vector<Quaternion>& v) {
      double r = 0.0;
      for (std::size_t m = 0; m < maa; ++m) r += quatlin::norm2(v[m] - s.truth.quats[m]);
      return r;
    };
    for (int t = 0; t < 100; ++t) {
      std::vector<Quaternion> hat = s.truth.quats;
      const auto q0 = random_unit_quat(g);
      for (auto& v : hat) v = v * q0 + random_quat(g) * 3.0;
      const auto fixed = fix_quaternion_gauge(hat, aa);
      const double best = residual(fixed);
      CHECK(best <= residual(hat) + 1e-9);
      // No random unit quaternion does better.
      for (int probe = 0; probe < 5; ++probe) {
        const auto q = random_unit_quat(g);
        std::vector<Quaternion> other = hat;
        for (auto& v : other) v = v * q;
        CHECK(best <= residual(other) + 1e-9);
      }
    }
  }

  TEST_CASE("degenerate accumulator") {
    std::vector<Quaternion> zeros(4);
    std::vector<Quaternion> truth{Quaternion(1.0)};
    QDSMDS_CHECK_ERROR(fix_quaternion_gauge(zeros, truth), ErrorCode::kDegenerateGauge);
    QDSMDS_CHECK_ERROR(fix_quaternion_gauge(zeros, std::span<const Quaternion>{}), ErrorCode::kDegenerateGauge);
  }
}

TEST_SUITE("recovery") {
  TEST_CASE("true edges give the true targets") {
    for (std::uint64_t seed = 20; seed < 25; ++seed) {
      const auto s = make_setup(seed);
      const auto c = netgeom::build_structure_matrix(s.edges);
      const auto x = recover_coords(s.truth.vectors, c, s.layout.anchor_matrix());
      CHECK(max_abs_diff(x, s.layout.target_matrix()) < 1e-10);
      // Residual of the stacked system.
      const auto nodes = recover_nodes(s.truth.vectors, c, s.layout.anchor_matrix());
      CHECK(max_abs_diff(c * nodes, s.truth.vectors) < 1e-10);
    }
  }

  TEST_CASE("zero edges with one anchor at the origin") {
    const netgeom::EdgeSet edges(1, 3, {{0, 1}, {0, 2}, {0, 3}});
    const auto c = netgeom::build_structure_matrix(edges);
    const auto x = recover_coords(RealMatrix(3, 3), c, RealMatrix(1, 3));
    CHECK(x.rows() == 3);
    CHECK(quatlin::max_abs(x) < 1e-15);
  }

  TEST_CASE("perturbations are bounded by the pseudo-inverse norm") {
    const auto s = make_setup(30);
    std::mt19937_64 g(30);
    const auto c = netgeom::build_structure_matrix(s.edges);
    const std::size_t na = 5, n = c.cols(), m = c.rows();
    RealMatrix stacked(na + m, n);
    for (std::size_t r = 0; r < na; ++r) stacked(r, r) = 1.0;
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t k = 0; k < n; ++k) stacked(na + r, k) = c(r, k);
    const double smin = quatlin::svd_jacobi(stacked).s.back();
    REQUIRE(smin > 0.0);

    const auto base = recover_coords(s.truth.vectors, c, s.layout.anchor_matrix());
    for (int t = 0; t < 20; ++t) {
      RealMatrix delta(m, 3);
      for (auto& v : delta.data()) v = uniform(g);
      const auto moved = recover_coords(s.truth.vectors + delta, c, s.layout.anchor_matrix());
      CHECK(quatlin::frobenius_norm(moved - base) <= quatlin::frobenius_norm(delta) / smin * (1 + 1e-12));
    }
  }

  TEST_CASE("shape checks") {
    const auto s = make_setup(31);
    const auto c = netgeom::build_structure_matrix(s.edges);
    QDSMDS_CHECK_ERROR(recover_coords(RealMatrix(3, 3), c, s.layout.anchor_matrix()), ErrorCode::kShapeMismatch);
  }
}

TEST_SUITE("alignment") {
  TEST_CASE("similarity transforms are undone") {
    std::mt19937_64 g(40);
    const auto s = make_setup(40);
    RealMatrix ref = to_matrix_rows(s);
    const std::vector<std::size_t> anchors{0, 1, 2, 3, 4};
    for (int t = 0; t < 10; ++t) {
      const auto r = random_rotation(g);
      const double scale = uniform(g, 0.5, 2.0);
      RealMatrix moved = ref * r * scale;
      const Vec3 shift{uniform(g, -5, 5), uniform(g, -5, 5), uniform(g, -5, 5)};
      for (std::size_t i = 0; i < moved.rows(); ++i) {
        moved(i, 0) += shift.x;
        moved(i, 1) += shift.y;
        moved(i, 2) += shift.z;
      }
      CHECK(max_abs_diff(procrustes_align(moved, ref, anchors), ref) < 1e-9);
    }
    CHECK(max_abs_diff(procrustes_align(ref, ref, anchors), ref) < 1e-10);
  }

  TEST_CASE("alignment never increases the anchor misfit") {
    std::mt19937_64 g(41);
    const auto s = make_setup(41);
    const RealMatrix ref = to_matrix_rows(s);
    const std::vector<std::size_t> anchors{0, 1, 2, 3, 4};
    auto anchor_misfit = [&](const RealMatrix& x) {
      double e = 0.0;
      for (std::size_t i : anchors)
        for (std::size_t c = 0; c < 3; ++c) e += (x(i, c) - ref(i, c)) * (x(i, c) - ref(i, c));
      return e;
    };
    for (int t = 0; t < 50; ++t) {
      RealMatrix noisy = ref;
      for (auto& v : noisy.data()) v += uniform(g, -2.0, 2.0);
      CHECK(anchor_misfit(procrustes_align(noisy, ref, anchors)) <= anchor_misfit(noisy) + 1e-9);
    }
  }

  TEST_CASE("degenerate references") {
    const auto s = make_setup(42);
    const RealMatrix ref = to_matrix_rows(s);
    const std::vector<std::size_t> three{0, 1, 2};
    QDSMDS_CHECK_ERROR(procrustes_align(ref, ref, three), ErrorCode::kDegenerateReference);
    const std::vector<std::size_t> coplanar{0, 1, 2, 3};  // the four upper corners
    QDSMDS_CHECK_ERROR(procrustes_align(ref, ref, coplanar), ErrorCode::kDegenerateReference);
  }
}

TEST_SUITE("error metric") {
  TEST_CASE("examples") {
    RealMatrix a(4, 3);
    for (auto& v : a.data()) v = 1.5;
    CHECK(error_metric(a, a) == 0.0);
    RealMatrix one(1, 3), moved(1, 3);
    moved(0, 0) = 3.0;
    moved(0, 1) = 4.0;
    CHECK(error_metric(moved, one) == doctest::Approx(5.0));
    RealMatrix b = a;
    b(2, 1) += 0.7;
    b(0, 0) -= 0.2;
    RealMatrix b2 = a + (b - a) * 2.0;
    CHECK(error_metric(b2, a) == doctest::Approx(2.0 * error_metric(b, a)));
    QDSMDS_CHECK_ERROR(error_metric(a, one), ErrorCode::kShapeMismatch);
  }
}
