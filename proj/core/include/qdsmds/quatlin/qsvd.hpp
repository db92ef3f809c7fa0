#pragma once

#include <vector>

#include "qdsmds/quatlin/hermitian_eig.hpp"
#include "qdsmds/quatlin/matrix.hpp"

namespace qdsmds::quatlin {

struct QsvdOptions {
  /// Input is Hermitian-quaternion; otherwise the dominant pair is taken from K K^H.
  bool hermitian = true;
  EigenOptions eigen{};
};

/// Dominant singular pair of a square quaternion matrix.
struct DominantPair {
  /// Largest singular value (>= 0).
  double sigma1 = 0.0;
  /// Unit left singular vector paired with sigma1.
  std::vector<Quaternion> u1;
  /// All singular values, descending.
  std::vector<double> singular_values;
  /// Signed right eigenvalue behind sigma1 (Hermitian input only; equals
  /// sigma1 unless the dominant eigenvalue is negative).
  double eigenvalue1 = 0.0;
  /// Largest relative gap between the two adjoint eigenvalues of a pair.
  double pairing_gap = 0.0;
};

/// Quaternion SVD, dominant part, computed through the complex adjoint.
///
/// The adjoint of a Hermitian-quaternion M x M matrix is a 2M x 2M complex
/// Hermitian matrix whose eigenvalues come in equal pairs, one pair per
/// quaternion right eigenvalue. A complex eigenvector (z_top; z_bot) maps
/// back to the quaternion column z_top - conj(z_bot) j. Of the two vectors
/// in the dominant pair the one with the larger |z_top[0]| is used (lower
/// index on ties).
///
/// Throws kNotHermitian (hermitian flag set but K is not) and kNoConvergence.
DominantPair qsvd_dominant(const QuatMatrix& k, const QsvdOptions& options = {});

/// Quaternion column assembled from one column of a 2M-row adjoint eigenvector matrix.
std::vector<Quaternion> quaternion_column_from_adjoint(const ComplexMatrix& vectors, std::size_t col);

}  // namespace qdsmds::quatlin
