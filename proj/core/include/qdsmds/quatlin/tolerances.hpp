#pragma once

namespace qdsmds::quatlin {

/// Numerical thresholds used by the linear algebra kernels.
struct Tolerances {
  /// Relative Frobenius asymmetry accepted as Hermitian.
  double hermitian_rel = 1e-9;
  /// Jacobi stops once the off-diagonal Frobenius norm drops below this
  /// fraction of ||A||_F.
  double jacobi_offdiag_rel = 1e-12;
  int jacobi_max_sweeps = 100;
  /// Implicit-shift QL iterations allowed per eigenvalue.
  int ql_max_iterations = 60;
  /// Quaternion gauge accumulator below this norm is treated as degenerate.
  double gauge_min_norm = 1e-12;
  /// Singular values below this fraction of the largest count as zero.
  double rank_rel = 1e-12;
};

inline constexpr Tolerances kDefaultTolerances{};

}  // namespace qdsmds::quatlin
