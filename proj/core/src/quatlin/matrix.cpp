#include "qdsmds/quatlin/matrix.hpp"

namespace qdsmds::quatlin {

ComplexMatrix to_adjoint(const QuatMatrix& q) {
  const std::size_t m = q.rows();
  const std::size_t n = q.cols();
  ComplexMatrix out(2 * m, 2 * n);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const Complex a = q(r, c).simplex();
      const Complex b = q(r, c).perplex();
      out(r, c) = a;
      out(r, c + n) = b;
      out(r + m, c) = -std::conj(b);
      out(r + m, c + n) = std::conj(a);
    }
  }
  return out;
}

QuatMatrix outer_conj(std::span<const Quaternion> u, std::span<const Quaternion> v) {
  QuatMatrix out(u.size(), v.size());
  for (std::size_t r = 0; r < u.size(); ++r)
    for (std::size_t c = 0; c < v.size(); ++c) out(r, c) = u[r] * conj(v[c]);
  return out;
}

}  // namespace qdsmds::quatlin
