#pragma once

#include <cassert>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "qdsmds/error.hpp"
#include "qdsmds/quatlin/quaternion.hpp"

namespace qdsmds::quatlin {

using Complex = std::complex<double>;

// Scalar traits shared by the real, complex and quaternion matrices.
inline double conj_of(double v) { return v; }
inline Complex conj_of(const Complex& v) { return std::conj(v); }
inline Quaternion conj_of(const Quaternion& v) { return conj(v); }

inline double abs2_of(double v) { return v * v; }
inline double abs2_of(const Complex& v) { return std::norm(v); }
inline double abs2_of(const Quaternion& v) { return norm2(v); }

/// Dense row-major matrix over a real, complex or quaternion scalar.
template <typename T>
class Matrix {
 public:
  using value_type = T;

  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1.0);
    return m;
  }

  /// Single column from a vector of entries.
  static Matrix column(std::span<const T> entries) {
    Matrix m(entries.size(), 1);
    for (std::size_t i = 0; i < entries.size(); ++i) m(i, 0) = entries[i];
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool is_square() const noexcept { return rows_ == cols_; }

  T& operator()(std::size_t r, std::size_t c) {
    assert(r < rows_ && c < cols_);
    return data_[r * cols_ + c];
  }
  const T& operator()(std::size_t r, std::size_t c) const {
    assert(r < rows_ && c < cols_);
    return data_[r * cols_ + c];
  }

  std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }

  std::vector<T> col(std::size_t c) const {
    std::vector<T> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
  }

  Matrix& operator+=(const Matrix& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Matrix& operator*=(double s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

  bool operator==(const Matrix&) const = default;

 private:
  void require_same_shape(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) {
      throw Error(ErrorCode::kShapeMismatch, "matrix shapes differ");
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using RealMatrix = Matrix<double>;
using ComplexMatrix = Matrix<Complex>;
using QuatMatrix = Matrix<Quaternion>;

template <typename T>
Matrix<T> operator+(Matrix<T> a, const Matrix<T>& b) { return a += b; }
template <typename T>
Matrix<T> operator-(Matrix<T> a, const Matrix<T>& b) { return a -= b; }
template <typename T>
Matrix<T> operator*(Matrix<T> a, double s) { return a *= s; }
template <typename T>
Matrix<T> operator*(double s, Matrix<T> a) { return a *= s; }

template <typename T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows()) throw Error(ErrorCode::kShapeMismatch, "inner dimensions differ");
  Matrix<T> out(a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const T& lhs = a(r, k);
      auto dst = out.row(r);
      auto src = b.row(k);
      // Left operand stays on the left: quaternion products do not commute.
      for (std::size_t c = 0; c < b.cols(); ++c) dst[c] += lhs * src[c];
    }
  }
  return out;
}

template <typename T>
Matrix<T> transpose(const Matrix<T>& a) {
  Matrix<T> out(a.cols(), a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out(c, r) = a(r, c);
  return out;
}

template <typename T>
Matrix<T> conj_transpose(const Matrix<T>& a) {
  Matrix<T> out(a.cols(), a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out(c, r) = conj_of(a(r, c));
  return out;
}

template <typename T>
double frobenius_norm(const Matrix<T>& a) {
  double s = 0.0;
  for (const auto& v : a.data()) s += abs2_of(v);
  return std::sqrt(s);
}

/// Largest entrywise modulus.
template <typename T>
double max_abs(const Matrix<T>& a) {
  double m = 0.0;
  for (const auto& v : a.data()) m = std::max(m, std::sqrt(abs2_of(v)));
  return m;
}

/// ||A - A^H||_F <= rel_tol * ||A||_F (an all-zero matrix is Hermitian).
template <typename T>
bool is_hermitian(const Matrix<T>& a, double rel_tol) {
  if (!a.is_square()) return false;
  double diff = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = r; c < a.cols(); ++c) diff += 2.0 * abs2_of(a(r, c) - conj_of(a(c, r)));
  return std::sqrt(diff) <= rel_tol * frobenius_norm(a);
}

/// Complex adjoint of an m x n quaternion matrix Q = A + B j:
/// the 2m x 2n block matrix [[A, B], [-conj(B), conj(A)]].
ComplexMatrix to_adjoint(const QuatMatrix& q);

/// Outer product u v^H of two quaternion columns.
QuatMatrix outer_conj(std::span<const Quaternion> u, std::span<const Quaternion> v);

}  // namespace qdsmds::quatlin
