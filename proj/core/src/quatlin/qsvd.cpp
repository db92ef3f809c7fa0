#include "qdsmds/quatlin/qsvd.hpp"

#include <algorithm>
#include <cmath>

namespace qdsmds::quatlin {

std::vector<Quaternion> quaternion_column_from_adjoint(const ComplexMatrix& vectors, std::size_t col) {
  const std::size_t m = vectors.rows() / 2;
  std::vector<Quaternion> out(m);
  for (std::size_t r = 0; r < m; ++r) {
    out[r] = Quaternion::from_complex_pair(vectors(r, col), -std::conj(vectors(r + m, col)));
  }
  return out;
}

DominantPair qsvd_dominant(const QuatMatrix& k, const QsvdOptions& options) {
  if (!k.is_square()) throw Error(ErrorCode::kShapeMismatch, "qsvd_dominant expects a square matrix");
  const std::size_t m = k.rows();
  DominantPair out;
  if (m == 0) return out;

  if (options.hermitian && !is_hermitian(k, options.eigen.tol.hermitian_rel)) {
    throw Error(ErrorCode::kNotHermitian, "quaternion kernel is not Hermitian");
  }
  // For a general K the left singular vectors are eigenvectors of K K^H.
  const QuatMatrix target = options.hermitian ? k : k * conj_transpose(k);

  // Only the two vectors of the top adjoint pair are needed.
  EigenOptions eig_opt = options.eigen;
  eig_opt.compute_vectors = true;
  eig_opt.max_vectors = 2;
  const ComplexMatrix adjoint = to_adjoint(target);
  const auto eig = hermitian_eig(adjoint, eig_opt);

  // Adjoint eigenvalues pair up; one representative per quaternion eigenvalue.
  double scale = 0.0;
  for (double v : eig.values) scale = std::max(scale, std::abs(v));
  std::vector<double> right_eigs(m);
  for (std::size_t p = 0; p < m; ++p) {
    const double a = eig.values[2 * p];
    const double b = eig.values[2 * p + 1];
    right_eigs[p] = 0.5 * (a + b);
    if (scale > 0.0) out.pairing_gap = std::max(out.pairing_gap, std::abs(a - b) / scale);
  }

  std::size_t best = 0;
  for (std::size_t p = 1; p < m; ++p) {
    if (std::abs(right_eigs[p]) > std::abs(right_eigs[best])) best = p;
  }

  out.singular_values.resize(m);
  for (std::size_t p = 0; p < m; ++p) {
    out.singular_values[p] =
        options.hermitian ? std::abs(right_eigs[p]) : std::sqrt(std::max(right_eigs[p], 0.0));
  }
  std::sort(out.singular_values.begin(), out.singular_values.end(), std::greater<>());

  out.eigenvalue1 = options.hermitian ? right_eigs[best] : 0.0;
  out.sigma1 = options.hermitian ? std::abs(right_eigs[best]) : std::sqrt(std::max(right_eigs[best], 0.0));

  // A dominant negative eigenvalue sits at the bottom of the spectrum; its
  // pair is the top pair of -adjoint.
  const bool from_bottom = best != 0;
  const auto top = from_bottom ? hermitian_eig(adjoint * -1.0, eig_opt) : eig;
  const std::size_t pick = std::abs(top.vectors(0, 1)) > std::abs(top.vectors(0, 0)) ? 1 : 0;
  out.u1 = quaternion_column_from_adjoint(top.vectors, pick);
  return out;
}

}  // namespace qdsmds::quatlin
