#pragma once

#include <cstddef>
#include <vector>

#include "qdsmds/quatlin/matrix.hpp"
#include "qdsmds/quatlin/tolerances.hpp"

namespace qdsmds::quatlin {

enum class EigenMethod {
  /// Householder reduction to real tridiagonal form, then implicit-shift QL.
  kTridiagonalQL,
  /// Cyclic two-sided Jacobi rotations.
  kJacobi,
};

struct EigenOptions {
  EigenMethod method = EigenMethod::kTridiagonalQL;
  bool compute_vectors = true;
  /// Only the eigenvectors of the largest `max_vectors` eigenvalues are
  /// returned. With the QL method these come from inverse iteration on the
  /// tridiagonal form, which is much cheaper than the full basis.
  std::size_t max_vectors = static_cast<std::size_t>(-1);
  Tolerances tol{};
};

/// Eigenvalues sorted descending; column k of `vectors` pairs with values[k].
/// `vectors` is empty when the caller asked for values only and has
/// min(n, max_vectors) columns otherwise.
template <typename T>
struct EigenResult {
  std::vector<double> values;
  Matrix<T> vectors;
  /// Jacobi sweeps or total QL iterations, for diagnostics.
  int iterations = 0;
};

/// Full spectrum of a real symmetric matrix.
/// Throws kNotHermitian if the input is not symmetric within tol.hermitian_rel,
/// kNoConvergence if the iteration limit is hit.
EigenResult<double> hermitian_eig(const RealMatrix& a, const EigenOptions& options = {});

/// Full spectrum of a complex Hermitian matrix.
EigenResult<Complex> hermitian_eig(const ComplexMatrix& a, const EigenOptions& options = {});

}  // namespace qdsmds::quatlin
