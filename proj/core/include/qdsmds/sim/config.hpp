#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "qdsmds/geometry.hpp"
#include "qdsmds/scenario.hpp"

namespace qdsmds::sim {

/// Everything that determines one Monte Carlo sweep.
///
/// Defaults reproduce the reference setup: a 30 x 30 x 10 m room, anchors
/// at the four upper corners and the origin, 15 uniformly placed targets.
struct ExperimentConfig {
  Vec3 room{30.0, 30.0, 10.0};
  std::vector<Vec3> anchors{{0.0, 0.0, 10.0}, {30.0, 0.0, 10.0}, {30.0, 30.0, 10.0}, {0.0, 30.0, 10.0}, {0.0, 0.0, 0.0}};
  std::size_t num_targets = 15;
  scenario::Scenario scenario = scenario::Scenario::kI;
  std::vector<double> sigma_d = default_sigma_grid();
  std::vector<double> epsilon_deg{10.0, 20.0, 30.0, 40.0, 50.0};
  std::size_t trials = 500;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  bool procrustes = false;
  bool distance_redraw_per_pair = false;
  std::filesystem::path out_dir = "results";

  /// 0.2, 0.4, ..., 3.0 m.
  static std::vector<double> default_sigma_grid();

  /// Throws kConfigError on an unusable configuration.
  void validate() const;
};

/// Sets one key from its text value. Keys: room, anchors, targets, scenario,
/// sigma_d, epsilon, trials, seed, workers, procrustes,
/// distance_redraw_per_pair, out. Throws kConfigError on unknown keys or
/// malformed values.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Parses "key = value" lines; '#' starts a comment. Later keys win.
ExperimentConfig parse_config(std::istream& in, ExperimentConfig base = {});
ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base = {});

/// Writes the config back in the same format.
std::string to_config_text(const ExperimentConfig& config);

/// "a,b,c" or "start:stop:step" (inclusive).
std::vector<double> parse_number_list(std::string_view text);

}  // namespace qdsmds::sim
