#pragma once

#include <cstdint>
#include <limits>

namespace qdsmds::noise {

/// What a random stream is used for. Each purpose of each trial gets its
/// own independent stream.
enum class Purpose : std::uint64_t {
  kTargets = 1,
  kDistance = 2,
  kAdoa = 3,
  kPlaneAngles = 4,
  kPairDistance = 5,
  kUser = 100,
};

/// Counter-based random stream.
///
/// The 64-bit output at draw n is a SplitMix64 finalizer applied to
/// key + n * golden_gamma, with key a hash of (master seed, trial, purpose).
/// Two streams with the same identity produce the same sequence no matter
/// which thread creates them or in what order.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t master_seed, std::uint64_t trial, Purpose purpose);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform on the open interval (0, 1).
  double uniform();
  /// Standard normal (Box-Muller, one variate per pair of uniforms).
  double normal();

  std::uint64_t draws() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t x);

/// Distance and angle noise levels of one sweep point.
struct NoiseParams {
  double sigma_d = 0.0;      // meters
  double epsilon_deg = 0.0;  // central-90% bounding angle; 0 means noiseless angles
  double rho = std::numeric_limits<double>::infinity();

  /// Calibrates rho from epsilon. epsilon = 0 yields rho = +inf.
  static NoiseParams make(double sigma_d, double epsilon_deg);
};

/// Gamma(shape k, scale theta) by Marsaglia-Tsang; shape < 1 uses the
/// U^(1/k) boost.
double sample_gamma(double shape, double scale, RngStream& rng);

/// Measured distance with mean d and standard deviation sigma_d:
/// Gamma(d^2 / sigma_d^2, sigma_d^2 / d). sigma_d = 0 returns d.
/// Throws kZeroDistance when d <= 0, kOutOfRange when sigma_d < 0.
double sample_gamma_distance(double d, double sigma_d, RngStream& rng);

/// Zero-mean von Mises (Tikhonov) deviate in (-pi, pi] by Best-Fisher
/// rejection; rho = 0 is uniform, rho = inf returns 0.
double sample_von_mises(double rho, RngStream& rng);

/// theta + von Mises(rho) deviate, wrapped into (theta - pi, theta + pi].
double sample_tikhonov_angle(double theta, double rho, RngStream& rng);

/// Exponentially scaled modified Bessel function e^{-x} I0(x), x >= 0.
double bessel_i0e(double x);

/// Tikhonov density p(phi; 0, rho).
double tikhonov_pdf(double phi, double rho);

/// Probability mass of p(.; 0, rho) inside [-bound, bound] (radians).
double tikhonov_central_mass(double bound, double rho);

/// rho such that the central 90% of the Tikhonov mass lies within
/// +/- epsilon degrees. Throws kOutOfRange unless 0 < epsilon < 162.
double calibrate_rho(double epsilon_deg);

constexpr double kPi = 3.14159265358979323846;
constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

}  // namespace qdsmds::noise
