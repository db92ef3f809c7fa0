#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qdsmds/netgeom.hpp"
#include "qdsmds/quatlin/hermitian_eig.hpp"
#include "qdsmds/quatlin/matrix.hpp"
#include "qdsmds/quatlin/quaternion.hpp"

namespace qdsmds::solver {

using quatlin::QuatMatrix;
using quatlin::Quaternion;
using quatlin::RealMatrix;

struct SolverOptions {
  /// Similarity-align the recovered nodes onto the anchors afterwards.
  bool procrustes = false;
  quatlin::EigenOptions eigen{};
};

struct Diagnostics {
  /// Kernel eigenvalues (real path) or quaternion singular values, descending.
  std::vector<double> spectrum;
  /// Anchor-anchor edge misfit ||V_AA_hat - V_AA||_F before and after the gauge fix.
  double gauge_residual_before = 0.0;
  double gauge_residual = 0.0;
  /// Share of ||nu_hat||^2 carried by the discarded k components (quaternion path).
  double k_energy = 0.0;
};

struct EstimateResult {
  RealMatrix x_hat;  // N_T x 3
  RealMatrix v_hat;  // M x 3
  double xi = 0.0;   // error against the layout's true targets
  Diagnostics diagnostics;
};

/// Rank-3 real-domain estimate: top three eigenpairs of the symmetric kernel
/// (negative eigenvalues clamped), orthogonal gauge from the anchor-anchor
/// edges, then anchored coordinate recovery.
/// Throws kRankDeficient if fewer than three eigenvalues are positive.
EstimateResult smds_estimate(const RealMatrix& kernel, const netgeom::NetworkLayout& layout,
                             const netgeom::EdgeSet& edges, const SolverOptions& options = {});

/// Rank-1 quaternion-domain estimate: dominant singular pair of the
/// Hermitian kernel, nu_hat = sqrt(sigma1) u1, right unit-quaternion gauge
/// from the anchor-anchor edges, (w, x, y) parts as edge vectors, then
/// anchored coordinate recovery.
EstimateResult qdsmds_estimate(const QuatMatrix& kernel, const netgeom::NetworkLayout& layout,
                               const netgeom::EdgeSet& edges, const SolverOptions& options = {});

/// Returns nu_hat q with q = normalize(sum_m conj(nu_hat_m) nu_true_m) over
/// the leading true_anchor_edges.size() entries, the unit quaternion that
/// minimizes sum_m |nu_hat_m q - nu_true_m|^2.
/// Throws kDegenerateGauge when the accumulator norm is below min_norm.
std::vector<Quaternion> fix_quaternion_gauge(std::span<const Quaternion> nu_hat,
                                             std::span<const Quaternion> true_anchor_edges,
                                             double min_norm = 1e-12);

/// All node coordinates (N x 3) from the stacked anchored system
/// [[I, 0], [C]] X = [X_A; V_hat], solved in the least-squares sense.
RealMatrix recover_nodes(const RealMatrix& v_hat, const RealMatrix& structure, const RealMatrix& anchors);

/// Target block of recover_nodes.
RealMatrix recover_coords(const RealMatrix& v_hat, const RealMatrix& structure, const RealMatrix& anchors);

/// Similarity transform (scale, rotation or reflection, translation) that
/// best maps the anchor rows of x_hat onto the same rows of x_ref, applied
/// to every row of x_hat. Throws kDegenerateReference with fewer than four
/// anchors or coplanar ones.
RealMatrix procrustes_align(const RealMatrix& x_hat, const RealMatrix& x_ref,
                            std::span<const std::size_t> anchor_indices);

/// ||X_hat - X||_F / N_T.
double error_metric(const RealMatrix& x_hat, const RealMatrix& x_true);

}  // namespace qdsmds::solver
