#pragma once

#include <cstdint>

#include "qdsmds/kernel.hpp"
#include "qdsmds/netgeom.hpp"
#include "qdsmds/noise.hpp"
#include "qdsmds/solver.hpp"

namespace qdsmds::scenario {

/// I: distances and ADoAs only; plane quantities come from a first SMDS
/// pass. II: per-edge elevation and azimuth are measured as well.
enum class Scenario { kI = 1, kII = 2 };

struct PipelineOptions {
  solver::SolverOptions solver{};
  /// Draw fresh distances for every kernel pair instead of once per edge.
  bool distance_redraw_per_pair = false;
};

/// Identifies the random streams of one Monte Carlo trial.
struct TrialSeed {
  std::uint64_t master_seed = 0;
  std::uint64_t trial = 0;
};

struct Outcome {
  solver::EstimateResult smds;
  solver::EstimateResult qdsmds;
  double xi_smds() const { return smds.xi; }
  double xi_qdsmds() const { return qdsmds.xi; }
};

/// Noisy distances (one Gamma draw per edge) and 3D ADoAs (one Tikhonov
/// draw per pair). Plane terms are left absent. Throws kZeroDistance when
/// the layout has coincident nodes.
kernel::ObservationTable measure_ranges_and_adoas(const netgeom::NetworkLayout& layout,
                                                  const netgeom::EdgeSet& edges, const noise::NoiseParams& noise,
                                                  const TrialSeed& seed, bool distance_redraw_per_pair);

/// Fills plane terms of every pair from estimated node positions.
void fill_planes_from_estimate(kernel::ObservationTable& table, const netgeom::NetworkLayout& layout,
                               const netgeom::EdgeSet& edges, const quatlin::RealMatrix& targets_hat);

/// Fills plane terms of every pair from fresh noisy elevation/azimuth draws
/// of both edges, using the pair's measured distances.
void fill_planes_from_angle_measurements(kernel::ObservationTable& table, const netgeom::NetworkLayout& layout,
                                         const netgeom::EdgeSet& edges, const noise::NoiseParams& noise,
                                         const TrialSeed& seed);

Outcome scenario1_pipeline(const netgeom::NetworkLayout& layout, const netgeom::EdgeSet& edges,
                           const noise::NoiseParams& noise, const TrialSeed& seed,
                           const PipelineOptions& options = {});

Outcome scenario2_pipeline(const netgeom::NetworkLayout& layout, const netgeom::EdgeSet& edges,
                           const noise::NoiseParams& noise, const TrialSeed& seed,
                           const PipelineOptions& options = {});

Outcome run_scenario(Scenario which, const netgeom::NetworkLayout& layout, const netgeom::EdgeSet& edges,
                     const noise::NoiseParams& noise, const TrialSeed& seed, const PipelineOptions& options = {});

}  // namespace qdsmds::scenario
