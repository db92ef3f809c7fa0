#include "qdsmds/noise.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "qdsmds/error.hpp"

namespace qdsmds::noise {

namespace {
constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t trial, Purpose purpose) {
  std::uint64_t k = mix64(master_seed + kGoldenGamma);
  k = mix64(k ^ (trial + 0x632BE59BD9B4E019ULL));
  k = mix64(k ^ (static_cast<std::uint64_t>(purpose) * 0xD6E8FEB86659FD93ULL));
  key_ = k;
}

RngStream::result_type RngStream::operator()() {
  ++counter_;
  return mix64(key_ + counter_ * kGoldenGamma);
}

double RngStream::uniform() {
  return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() {
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

NoiseParams NoiseParams::make(double sigma_d, double epsilon_deg) {
  if (sigma_d < 0.0) throw Error(ErrorCode::kOutOfRange, "sigma_d must be >= 0");
  NoiseParams p;
  p.sigma_d = sigma_d;
  p.epsilon_deg = epsilon_deg;
  p.rho = epsilon_deg == 0.0 ? std::numeric_limits<double>::infinity() : calibrate_rho(epsilon_deg);
  return p;
}

double sample_gamma(double shape, double scale, RngStream& rng) {
  if (shape < 1.0) {
    // Gamma(k) = Gamma(k + 1) * U^(1/k).
    const double g = sample_gamma(shape + 1.0, 1.0, rng);
    return scale * g * std::pow(rng.uniform(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = 0.0;
    double v = 0.0;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return scale * d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return scale * d * v;
  }
}

double sample_gamma_distance(double d, double sigma_d, RngStream& rng) {
  if (!(d > 0.0)) throw Error(ErrorCode::kZeroDistance, "true distance must be positive");
  if (sigma_d < 0.0) throw Error(ErrorCode::kOutOfRange, "sigma_d must be >= 0");
  if (sigma_d == 0.0) return d;
  const double shape = d * d / (sigma_d * sigma_d);
  const double scale = sigma_d * sigma_d / d;
  return sample_gamma(shape, scale, rng);
}

double wrap_angle(double a) {
  double r = std::remainder(a, 2.0 * kPi);  // [-pi, pi]
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

double sample_von_mises(double rho, RngStream& rng) {
  if (!(rho >= 0.0)) throw Error(ErrorCode::kOutOfRange, "rho must be >= 0");
  if (std::isinf(rho)) return 0.0;
  if (rho < 1e-8) return kPi * (2.0 * rng.uniform() - 1.0);
  if (rho > 1e6) {
    // Wrapped-normal limit; the Best-Fisher envelope loses precision here.
    return wrap_angle(rng.normal() / std::sqrt(rho));
  }
  double s = 0.0;
  if (rho < 1e-5) {
    s = 1.0 / rho + rho;
  } else {
    const double r = 1.0 + std::sqrt(1.0 + 4.0 * rho * rho);
    const double bf = (r - std::sqrt(2.0 * r)) / (2.0 * rho);
    s = (1.0 + bf * bf) / (2.0 * bf);
  }
  double w = 0.0;
  for (;;) {
    const double u = rng.uniform();
    const double z = std::cos(kPi * u);
    w = (1.0 + s * z) / (s + z);
    const double y = rho * (s - w);
    const double v = rng.uniform();
    if (y * (2.0 - y) - v >= 0.0 || std::log(y / v) + 1.0 - y >= 0.0) break;
  }
  const double angle = std::acos(std::clamp(w, -1.0, 1.0));
  return rng.uniform() < 0.5 ? -angle : angle;
}

double sample_tikhonov_angle(double theta, double rho, RngStream& rng) {
  return theta + wrap_angle(sample_von_mises(rho, rng));
}

double bessel_i0e(double x) {
  x = std::abs(x);
  if (x <= 15.0) {
    const double q = 0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k) {
      term *= q / (static_cast<double>(k) * static_cast<double>(k));
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    return sum * std::exp(-x);
  }
  // Large-argument asymptotic series, truncated at its smallest term.
  const double inv8x = 1.0 / (8.0 * x);
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = term * odd * odd * inv8x / k;
    if (next >= term) break;
    term = next;
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum / std::sqrt(2.0 * kPi * x);
}

double tikhonov_pdf(double phi, double rho) {
  return std::exp(rho * (std::cos(phi) - 1.0)) / (2.0 * kPi * bessel_i0e(rho));
}

namespace {

double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                    double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, b, fa, fm, fb, whole, tol, 60);
}

}  // namespace

double tikhonov_central_mass(double bound, double rho) {
  if (bound <= 0.0) return 0.0;
  if (bound >= kPi) return 1.0;
  const double i0e = bessel_i0e(rho);
  const auto f = [&](double phi) { return std::exp(rho * (std::cos(phi) - 1.0)) / (2.0 * kPi * i0e); };
  // Symmetric density: integrate [0, bound] and double. Splitting at the
  // density's width keeps the peak resolved for large rho.
  const double width = std::min(bound, 8.0 / std::sqrt(std::max(rho, 1e-12)));
  double mass = adaptive_simpson(f, 0.0, width, 0.5e-9);
  if (width < bound) mass += adaptive_simpson(f, width, bound, 0.5e-9);
  return 2.0 * mass;
}

double calibrate_rho(double epsilon_deg) {
  if (!(epsilon_deg > 0.0) || !(epsilon_deg < 162.0)) {
    throw Error(ErrorCode::kOutOfRange,
                "epsilon must lie in (0, 162) degrees, got " + std::to_string(epsilon_deg));
  }
  const double bound = deg_to_rad(epsilon_deg);
  constexpr double kTarget = 0.9;
  double lo = std::log(1e-9);
  double hi = std::log(1e9);
  if (tikhonov_central_mass(bound, std::exp(lo)) >= kTarget) return std::exp(lo);
  if (tikhonov_central_mass(bound, std::exp(hi)) < kTarget) {
    throw Error(ErrorCode::kOutOfRange, "epsilon too small to calibrate within rho <= 1e9");
  }
  // Central mass increases with rho.
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (tikhonov_central_mass(bound, std::exp(mid)) < kTarget) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::exp(0.5 * (lo + hi));
}

}  // namespace qdsmds::noise
