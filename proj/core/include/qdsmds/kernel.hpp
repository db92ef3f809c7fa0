#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qdsmds/geometry.hpp"
#include "qdsmds/quatlin/matrix.hpp"
#include "qdsmds/quatlin/quaternion.hpp"

namespace qdsmds::kernel {

using quatlin::QuatMatrix;
using quatlin::Quaternion;
using quatlin::RealMatrix;

/// Length, plane projections and direction of one edge vector.
struct EdgeProjection {
  double d = 0.0;
  double d_xy = 0.0;
  double d_xz = 0.0;
  double d_yz = 0.0;
  double theta = 0.0;  // elevation, asin(v_z / d)
  double phi = 0.0;    // azimuth, atan2(v_y, v_x)
};

/// Throws kZeroEdge for a zero vector.
EdgeProjection project_edge(const Vec3& v);

/// Per-edge quantities in the three coordinate planes: projected lengths and
/// the in-plane direction of the projection (atan2 of the second coordinate
/// over the first: (x,y), (x,z), (y,z)).
struct PlaneQuantities {
  double d_xy = 0.0;
  double d_xz = 0.0;
  double d_yz = 0.0;
  double psi_xy = 0.0;
  double psi_xz = 0.0;
  double psi_yz = 0.0;
};

/// Plane quantities of an edge vector.
PlaneQuantities plane_quantities(const Vec3& v);

/// Plane quantities reconstructed from a length and an elevation/azimuth
/// pair, as available from a planar antenna. Throws kZeroEdge if d <= 0.
PlaneQuantities derive_plane_quantities_from_angles(double d, double theta, double phi);

/// Where a field of an observation came from.
enum class Provenance { kMeasured, kEstimated, kAbsent };

/// Plane factors of one pair (m, p): projected lengths of both edges and the
/// plane ADoAs alpha^(plane)_mp = psi_p - psi_m.
struct PlaneTerms {
  double dm_xy = 0.0, dp_xy = 0.0;
  double dm_xz = 0.0, dp_xz = 0.0;
  double dm_yz = 0.0, dp_yz = 0.0;
  double adoa_xy = 0.0;
  double adoa_xz = 0.0;
  double adoa_yz = 0.0;
};

PlaneTerms make_plane_terms(const PlaneQuantities& m, const PlaneQuantities& p);

/// Everything measured or estimated about one unordered edge pair m < p.
struct PairObservation {
  double d_m = 0.0;
  double d_p = 0.0;
  double adoa = 0.0;  // 3D angle between the two edge vectors, radians
  PlaneTerms planes{};
  Provenance distance_source = Provenance::kAbsent;
  Provenance adoa_source = Provenance::kAbsent;
  Provenance plane_source = Provenance::kAbsent;
};

/// Kernel inputs for M edges: per-edge measured distances (the diagonal)
/// and the strict upper triangle of pair observations in row-major order.
class ObservationTable {
 public:
  explicit ObservationTable(std::size_t num_edges);

  std::size_t num_edges() const noexcept { return distances_.size(); }

  double& distance(std::size_t m) { return distances_[m]; }
  double distance(std::size_t m) const { return distances_[m]; }

  PairObservation& pair(std::size_t m, std::size_t p) { return pairs_[pair_index(m, p)]; }
  const PairObservation& pair(std::size_t m, std::size_t p) const { return pairs_[pair_index(m, p)]; }

  /// Offset of (m, p), m < p, within the strict upper triangle.
  std::size_t pair_index(std::size_t m, std::size_t p) const;

 private:
  std::vector<double> distances_;
  std::vector<PairObservation> pairs_;
};

/// Model of nu_m conj(nu_p):
///   d_m d_p cos(alpha) - i d^xy_m d^xy_p sin(alpha^xy)
///                      - j d^xz_m d^xz_p sin(alpha^xz)
///                      - k d^yz_m d^yz_p sin(alpha^yz).
/// Throws kMissingField when a distance, ADoA or plane field is absent.
Quaternion pair_products(const PairObservation& obs);

/// Hermitian quaternion kernel: upper triangle from pair_products, lower
/// triangle by conjugation, diagonal d_m^2.
QuatMatrix build_quat_gek(const ObservationTable& table);

/// Real kernel with entries d_m d_p cos(alpha_mp) and diagonal d_m^2.
RealMatrix build_real_gek(const ObservationTable& table);

/// Angle between two nonzero vectors, in [0, pi].
double angle_between(const Vec3& a, const Vec3& b);

/// Noise-free observation table from true edge vectors (all fields measured).
ObservationTable exact_observations(std::span<const Vec3> edges);

}  // namespace qdsmds::kernel
