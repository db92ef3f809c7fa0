#include "qdsmds/scenario.hpp"

#include <vector>

namespace qdsmds::scenario {

using kernel::ObservationTable;
using kernel::PairObservation;
using kernel::Provenance;
using noise::Purpose;
using noise::RngStream;

ObservationTable measure_ranges_and_adoas(const netgeom::NetworkLayout& layout, const netgeom::EdgeSet& edges,
                                          const noise::NoiseParams& noise, const TrialSeed& seed,
                                          bool distance_redraw_per_pair) {
  const auto nodes = layout.nodes();
  const auto v = netgeom::edge_vectors(nodes, edges);
  const std::size_t m_count = v.size();

  RngStream dist_rng(seed.master_seed, seed.trial, Purpose::kDistance);
  RngStream adoa_rng(seed.master_seed, seed.trial, Purpose::kAdoa);
  RngStream pair_rng(seed.master_seed, seed.trial, Purpose::kPairDistance);

  ObservationTable table(m_count);
  std::vector<double> true_d(m_count);
  for (std::size_t m = 0; m < m_count; ++m) {
    true_d[m] = norm(v[m]);
    table.distance(m) = noise::sample_gamma_distance(true_d[m], noise.sigma_d, dist_rng);
  }
  for (std::size_t m = 0; m < m_count; ++m) {
    for (std::size_t p = m + 1; p < m_count; ++p) {
      PairObservation& obs = table.pair(m, p);
      if (distance_redraw_per_pair) {
        obs.d_m = noise::sample_gamma_distance(true_d[m], noise.sigma_d, pair_rng);
        obs.d_p = noise::sample_gamma_distance(true_d[p], noise.sigma_d, pair_rng);
      } else {
        obs.d_m = table.distance(m);
        obs.d_p = table.distance(p);
      }
      obs.adoa = noise::sample_tikhonov_angle(kernel::angle_between(v[m], v[p]), noise.rho, adoa_rng);
      obs.distance_source = Provenance::kMeasured;
      obs.adoa_source = Provenance::kMeasured;
      obs.plane_source = Provenance::kAbsent;
    }
  }
  return table;
}

void fill_planes_from_estimate(ObservationTable& table, const netgeom::NetworkLayout& layout,
                               const netgeom::EdgeSet& edges, const quatlin::RealMatrix& targets_hat) {
  std::vector<Vec3> nodes = layout.anchors();
  const auto est = netgeom::to_points(targets_hat);
  nodes.insert(nodes.end(), est.begin(), est.end());
  const auto v = netgeom::edge_vectors(nodes, edges);

  std::vector<kernel::PlaneQuantities> planes(v.size());
  for (std::size_t m = 0; m < v.size(); ++m) planes[m] = kernel::plane_quantities(v[m]);
  for (std::size_t m = 0; m < v.size(); ++m) {
    for (std::size_t p = m + 1; p < v.size(); ++p) {
      PairObservation& obs = table.pair(m, p);
      obs.planes = kernel::make_plane_terms(planes[m], planes[p]);
      obs.plane_source = Provenance::kEstimated;
    }
  }
}

void fill_planes_from_angle_measurements(ObservationTable& table, const netgeom::NetworkLayout& layout,
                                         const netgeom::EdgeSet& edges, const noise::NoiseParams& noise,
                                         const TrialSeed& seed) {
  const auto nodes = layout.nodes();
  const auto v = netgeom::edge_vectors(nodes, edges);
  std::vector<kernel::EdgeProjection> proj(v.size());
  for (std::size_t m = 0; m < v.size(); ++m) proj[m] = kernel::project_edge(v[m]);

  RngStream rng(seed.master_seed, seed.trial, Purpose::kPlaneAngles);
  for (std::size_t m = 0; m < v.size(); ++m) {
    for (std::size_t p = m + 1; p < v.size(); ++p) {
      PairObservation& obs = table.pair(m, p);
      const double theta_m = noise::sample_tikhonov_angle(proj[m].theta, noise.rho, rng);
      const double phi_m = noise::sample_tikhonov_angle(proj[m].phi, noise.rho, rng);
      const double theta_p = noise::sample_tikhonov_angle(proj[p].theta, noise.rho, rng);
      const double phi_p = noise::sample_tikhonov_angle(proj[p].phi, noise.rho, rng);
      obs.planes = kernel::make_plane_terms(kernel::derive_plane_quantities_from_angles(obs.d_m, theta_m, phi_m),
                                            kernel::derive_plane_quantities_from_angles(obs.d_p, theta_p, phi_p));
      obs.plane_source = Provenance::kMeasured;
    }
  }
}

Outcome scenario1_pipeline(const netgeom::NetworkLayout& layout, const netgeom::EdgeSet& edges,
                           const noise::NoiseParams& noise, const TrialSeed& seed, const PipelineOptions& options) {
  ObservationTable table = measure_ranges_and_adoas(layout, edges, noise, seed, options.distance_redraw_per_pair);
  Outcome out;
  out.smds = solver::smds_estimate(kernel::build_real_gek(table), layout, edges, options.solver);
  fill_planes_from_estimate(table, layout, edges, out.smds.x_hat);
  out.qdsmds = solver::qdsmds_estimate(kernel::build_quat_gek(table), layout, edges, options.solver);
  return out;
}

Outcome scenario2_pipeline(const netgeom::NetworkLayout& layout, const netgeom::EdgeSet& edges,
                           const noise::NoiseParams& noise, const TrialSeed& seed, const PipelineOptions& options) {
  ObservationTable table = measure_ranges_and_adoas(layout, edges, noise, seed, options.distance_redraw_per_pair);
  Outcome out;
  out.smds = solver::smds_estimate(kernel::build_real_gek(table), layout, edges, options.solver);
  fill_planes_from_angle_measurements(table, layout, edges, noise, seed);
  out.qdsmds = solver::qdsmds_estimate(kernel::build_quat_gek(table), layout, edges, options.solver);
  return out;
}

Outcome run_scenario(Scenario which, const netgeom::NetworkLayout& layout, const netgeom::EdgeSet& edges,
                     const noise::NoiseParams& noise, const TrialSeed& seed, const PipelineOptions& options) {
  return which == Scenario::kI ? scenario1_pipeline(layout, edges, noise, seed, options)
                               : scenario2_pipeline(layout, edges, noise, seed, options);
}

}  // namespace qdsmds::scenario
