#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <ostream>

namespace qdsmds::quatlin {

/// Quaternion w + x i + y j + z k with i^2 = j^2 = k^2 = ijk = -1.
///
/// Multiplication is the Hamilton product and is not commutative. A
/// quaternion splits as (w + x i) + (y + z i) j, which is the pair of
/// complex numbers used by the adjoint embedding.
struct Quaternion {
  double w = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Quaternion() = default;
  constexpr Quaternion(double w_, double x_, double y_, double z_) : w(w_), x(x_), y(y_), z(z_) {}
  constexpr explicit Quaternion(double real) : w(real) {}

  static constexpr Quaternion i() { return {0.0, 1.0, 0.0, 0.0}; }
  static constexpr Quaternion j() { return {0.0, 0.0, 1.0, 0.0}; }
  static constexpr Quaternion k() { return {0.0, 0.0, 0.0, 1.0}; }

  constexpr bool operator==(const Quaternion&) const = default;

  constexpr Quaternion& operator+=(const Quaternion& o) {
    w += o.w; x += o.x; y += o.y; z += o.z;
    return *this;
  }
  constexpr Quaternion& operator-=(const Quaternion& o) {
    w -= o.w; x -= o.x; y -= o.y; z -= o.z;
    return *this;
  }
  constexpr Quaternion& operator*=(double s) {
    w *= s; x *= s; y *= s; z *= s;
    return *this;
  }

  /// First complex half (w + x i).
  std::complex<double> simplex() const { return {w, x}; }
  /// Second complex half (y + z i), the coefficient of j.
  std::complex<double> perplex() const { return {y, z}; }

  static Quaternion from_complex_pair(std::complex<double> a, std::complex<double> b) {
    return {a.real(), a.imag(), b.real(), b.imag()};
  }
};

constexpr Quaternion operator+(Quaternion a, const Quaternion& b) { return a += b; }
constexpr Quaternion operator-(Quaternion a, const Quaternion& b) { return a -= b; }
constexpr Quaternion operator-(const Quaternion& a) { return {-a.w, -a.x, -a.y, -a.z}; }
constexpr Quaternion operator*(Quaternion a, double s) { return a *= s; }
constexpr Quaternion operator*(double s, Quaternion a) { return a *= s; }

constexpr Quaternion operator*(const Quaternion& a, const Quaternion& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

constexpr Quaternion& operator*=(Quaternion& a, const Quaternion& b) { return a = a * b; }

/// Hamilton product, spelled out for call sites that read better as a function.
constexpr Quaternion qmul(const Quaternion& a, const Quaternion& b) { return a * b; }

constexpr Quaternion conj(const Quaternion& q) { return {q.w, -q.x, -q.y, -q.z}; }
constexpr double norm2(const Quaternion& q) { return q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z; }
// Scaled so that tiny or huge components neither underflow nor overflow.
inline double norm(const Quaternion& q) {
  const double m = std::max({std::abs(q.w), std::abs(q.x), std::abs(q.y), std::abs(q.z)});
  if (m == 0.0 || !std::isfinite(m)) return m;
  const Quaternion s{q.w / m, q.x / m, q.y / m, q.z / m};
  return m * std::sqrt(norm2(s));
}

/// 4-vector inner product Re(conj(a) b).
constexpr double dot(const Quaternion& a, const Quaternion& b) {
  return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
}

inline Quaternion normalized(const Quaternion& q) {
  const double n = norm(q);
  return n > 0.0 ? q * (1.0 / n) : q;
}

inline std::ostream& operator<<(std::ostream& os, const Quaternion& q) {
  return os << '(' << q.w << ", " << q.x << "i, " << q.y << "j, " << q.z << "k)";
}

}  // namespace qdsmds::quatlin
