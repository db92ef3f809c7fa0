#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "qdsmds/sim/config.hpp"

namespace qdsmds::sim {

/// One (sweep point, trial) outcome. Failed trials keep the reason and
/// leave the numeric fields NaN.
struct TrialRecord {
  scenario::Scenario scenario = scenario::Scenario::kI;
  double epsilon_deg = 0.0;
  double sigma_d = 0.0;
  std::size_t trial = 0;
  bool ok = false;
  double xi_smds = 0.0;
  double xi_qdsmds = 0.0;
  double qd_sigma1 = 0.0;         // dominant quaternion singular value
  double qd_sigma2_ratio = 0.0;   // second / first quaternion singular value
  double smds_eig4_ratio = 0.0;   // fourth / first real kernel eigenvalue
  double k_energy = 0.0;
  double gauge_residual_smds = 0.0;
  double gauge_residual_qdsmds = 0.0;
  std::string reason;
};

struct PointSummary {
  scenario::Scenario scenario = scenario::Scenario::kI;
  double epsilon_deg = 0.0;
  double sigma_d = 0.0;
  std::size_t ok = 0;
  std::size_t failed = 0;
  double mean_smds = 0.0;
  double std_smds = 0.0;
  double mean_qdsmds = 0.0;
  double std_qdsmds = 0.0;
  /// More than 1% of trials failed; the point is reported but not plotted.
  bool excluded = false;
};

struct ExperimentResult {
  std::vector<TrialRecord> records;   // sorted by (epsilon, sigma_d, trial)
  std::vector<PointSummary> summary;  // sorted by (epsilon, sigma_d)
};

/// Targets of trial `trial`: uniform in the room, from the trial's own stream.
std::vector<Vec3> sample_targets(const ExperimentConfig& config, std::size_t trial);

/// Runs one trial at one sweep point and never throws for per-trial
/// failures (they become !ok records).
TrialRecord run_trial(const ExperimentConfig& config, const noise::NoiseParams& noise, std::size_t trial);

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

/// Full sweep over epsilon x sigma_d x trials on config.workers threads.
/// The result does not depend on the worker count.
ExperimentResult run_experiment(const ExperimentConfig& config, const ProgressFn& progress = {});

/// Per-point mean and sample standard deviation over successful trials.
std::vector<PointSummary> summarize(const std::vector<TrialRecord>& records);

void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& records);
void write_summary_csv(std::ostream& out, const std::vector<PointSummary>& summary);
std::vector<TrialRecord> read_trials_csv(std::istream& in);

/// Shortest round-trippable decimal text of a double ("" for NaN).
std::string format_number(double v);

}  // namespace qdsmds::sim
