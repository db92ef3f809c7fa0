#pragma once

#include <vector>

#include "qdsmds/quatlin/matrix.hpp"
#include "qdsmds/quatlin/tolerances.hpp"

namespace qdsmds::quatlin {

/// Thin SVD A = U diag(S) V^T of a real m x n matrix with m >= n.
struct SvdResult {
  RealMatrix u;               // m x n
  std::vector<double> s;      // n, descending
  RealMatrix v;               // n x n
};

/// One-sided (Hestenes) Jacobi SVD. Accurate to working precision for the
/// small matrices it is used on (Procrustes cores, rank checks).
/// Columns of U belonging to zero singular values are left as zero.
SvdResult svd_jacobi(const RealMatrix& a);

/// Numerical rank: singular values above rel_tol * s_max.
std::size_t numerical_rank(const RealMatrix& a, double rel_tol = kDefaultTolerances.rank_rel);

/// Least-squares solution of A X = B via Householder QR (A m x n, m >= n,
/// full column rank). Throws kSingularSystem when A is rank deficient.
RealMatrix least_squares(const RealMatrix& a, const RealMatrix& b);

/// Orthogonal Q (3 x 3 or generally n x n) minimizing ||A Q - B||_F,
/// reflections allowed. Throws kRankDeficient if A^T B is singular.
RealMatrix orthogonal_procrustes(const RealMatrix& a, const RealMatrix& b);

}  // namespace qdsmds::quatlin
