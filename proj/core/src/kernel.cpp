#include "qdsmds/kernel.hpp"

#include <algorithm>
#include <cmath>

#include "qdsmds/error.hpp"

namespace qdsmds::kernel {

EdgeProjection project_edge(const Vec3& v) {
  const double d = norm(v);
  if (!(d > 0.0)) throw Error(ErrorCode::kZeroEdge, "edge vector has zero length");
  EdgeProjection out;
  out.d = d;
  out.d_xy = std::hypot(v.x, v.y);
  out.d_xz = std::hypot(v.x, v.z);
  out.d_yz = std::hypot(v.y, v.z);
  out.theta = std::asin(std::clamp(v.z / d, -1.0, 1.0));
  out.phi = std::atan2(v.y, v.x);
  return out;
}

PlaneQuantities plane_quantities(const Vec3& v) {
  return {std::hypot(v.x, v.y), std::hypot(v.x, v.z), std::hypot(v.y, v.z),
          std::atan2(v.y, v.x), std::atan2(v.z, v.x), std::atan2(v.z, v.y)};
}

PlaneQuantities derive_plane_quantities_from_angles(double d, double theta, double phi) {
  if (!(d > 0.0)) throw Error(ErrorCode::kZeroEdge, "edge length must be positive");
  const Vec3 u{std::cos(theta) * std::cos(phi), std::cos(theta) * std::sin(phi), std::sin(theta)};
  return plane_quantities(d * u);
}

PlaneTerms make_plane_terms(const PlaneQuantities& m, const PlaneQuantities& p) {
  PlaneTerms t;
  t.dm_xy = m.d_xy;
  t.dp_xy = p.d_xy;
  t.dm_xz = m.d_xz;
  t.dp_xz = p.d_xz;
  t.dm_yz = m.d_yz;
  t.dp_yz = p.d_yz;
  t.adoa_xy = p.psi_xy - m.psi_xy;
  t.adoa_xz = p.psi_xz - m.psi_xz;
  t.adoa_yz = p.psi_yz - m.psi_yz;
  return t;
}

ObservationTable::ObservationTable(std::size_t num_edges)
    : distances_(num_edges, 0.0), pairs_(num_edges > 1 ? num_edges * (num_edges - 1) / 2 : 0) {}

std::size_t ObservationTable::pair_index(std::size_t m, std::size_t p) const {
  const std::size_t n = distances_.size();
  if (!(m < p && p < n)) throw Error(ErrorCode::kShapeMismatch, "pair index requires m < p < M");
  return m * n - m * (m + 1) / 2 + (p - m - 1);
}

Quaternion pair_products(const PairObservation& obs) {
  if (obs.distance_source == Provenance::kAbsent) throw Error(ErrorCode::kMissingField, "pair distance");
  if (obs.adoa_source == Provenance::kAbsent) throw Error(ErrorCode::kMissingField, "pair ADoA");
  if (obs.plane_source == Provenance::kAbsent) throw Error(ErrorCode::kMissingField, "pair plane terms");
  const PlaneTerms& t = obs.planes;
  return {obs.d_m * obs.d_p * std::cos(obs.adoa), -t.dm_xy * t.dp_xy * std::sin(t.adoa_xy),
          -t.dm_xz * t.dp_xz * std::sin(t.adoa_xz), -t.dm_yz * t.dp_yz * std::sin(t.adoa_yz)};
}

QuatMatrix build_quat_gek(const ObservationTable& table) {
  const std::size_t n = table.num_edges();
  QuatMatrix k(n, n);
  for (std::size_t m = 0; m < n; ++m) {
    const double d = table.distance(m);
    k(m, m) = Quaternion(d * d);
    for (std::size_t p = m + 1; p < n; ++p) {
      const Quaternion q = pair_products(table.pair(m, p));
      k(m, p) = q;
      k(p, m) = conj(q);
    }
  }
  return k;
}

RealMatrix build_real_gek(const ObservationTable& table) {
  const std::size_t n = table.num_edges();
  RealMatrix k(n, n);
  for (std::size_t m = 0; m < n; ++m) {
    const double d = table.distance(m);
    k(m, m) = d * d;
    for (std::size_t p = m + 1; p < n; ++p) {
      const PairObservation& obs = table.pair(m, p);
      if (obs.distance_source == Provenance::kAbsent) throw Error(ErrorCode::kMissingField, "pair distance");
      if (obs.adoa_source == Provenance::kAbsent) throw Error(ErrorCode::kMissingField, "pair ADoA");
      const double v = obs.d_m * obs.d_p * std::cos(obs.adoa);
      k(m, p) = v;
      k(p, m) = v;
    }
  }
  return k;
}

double angle_between(const Vec3& a, const Vec3& b) {
  const Vec3 cross{a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
  return std::atan2(norm(cross), dot(a, b));
}

ObservationTable exact_observations(std::span<const Vec3> edges) {
  const std::size_t n = edges.size();
  ObservationTable table(n);
  std::vector<PlaneQuantities> planes(n);
  for (std::size_t m = 0; m < n; ++m) {
    table.distance(m) = norm(edges[m]);
    planes[m] = plane_quantities(edges[m]);
  }
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t p = m + 1; p < n; ++p) {
      PairObservation& obs = table.pair(m, p);
      obs.d_m = table.distance(m);
      obs.d_p = table.distance(p);
      obs.adoa = angle_between(edges[m], edges[p]);
      obs.planes = make_plane_terms(planes[m], planes[p]);
      obs.distance_source = Provenance::kMeasured;
      obs.adoa_source = Provenance::kMeasured;
      obs.plane_source = Provenance::kMeasured;
    }
  }
  return table;
}

}  // namespace qdsmds::kernel
