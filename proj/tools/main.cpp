#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qdsmds/error.hpp"
#include "qdsmds/netgeom.hpp"
#include "qdsmds/noise.hpp"
#include "qdsmds/scenario.hpp"
#include "qdsmds/sim/config.hpp"
#include "qdsmds/sim/experiment.hpp"
#include "qdsmds/sim/plot.hpp"

namespace {

using qdsmds::sim::ExperimentConfig;

// Flags shared by simulate and single-trial. Unset flags leave the config
// file (or the built-in defaults) untouched.
struct SweepFlags {
  std::string config_path;
  std::optional<int> scenario;
  std::string sigma_d;
  std::string epsilon;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  bool procrustes = false;
  bool redraw = false;
  std::string out;

  void attach(CLI::App* app, bool sweep) {
    app->add_option("--config", config_path, "Key = value config file")->check(CLI::ExistingFile);
    app->add_option("--scenario", scenario, "Measurement scenario")->check(CLI::IsMember({1, 2}));
    app->add_option("--sigma-d", sigma_d, "Distance noise std [m]: list a,b,c or start:stop:step");
    app->add_option("--epsilon", epsilon, "Angle bounding angles [deg]: list a,b,c or start:stop:step");
    app->add_option("--seed", seed, "Master seed");
    app->add_flag("--procrustes", procrustes, "Similarity-align estimates onto the anchors");
    app->add_flag("--distance-redraw-per-pair", redraw, "Fresh distance draws for every kernel pair");
    if (sweep) {
      app->add_option("--trials", trials, "Trials per sweep point")->check(CLI::PositiveNumber);
      app->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
      app->add_option("--out", out, "Output directory");
    }
  }

  ExperimentConfig resolve() const {
    ExperimentConfig cfg = config_path.empty() ? ExperimentConfig{} : qdsmds::sim::load_config(config_path);
    if (scenario) cfg.scenario = static_cast<qdsmds::scenario::Scenario>(*scenario);
    if (!sigma_d.empty()) cfg.sigma_d = qdsmds::sim::parse_number_list(sigma_d);
    if (!epsilon.empty()) cfg.epsilon_deg = qdsmds::sim::parse_number_list(epsilon);
    if (trials) cfg.trials = *trials;
    if (seed) cfg.seed = *seed;
    if (workers) cfg.workers = *workers;
    if (procrustes) cfg.procrustes = true;
    if (redraw) cfg.distance_redraw_per_pair = true;
    if (!out.empty()) cfg.out_dir = out;
    cfg.validate();
    return cfg;
  }
};

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw qdsmds::Error(qdsmds::ErrorCode::kConfigError, "cannot write " + path.string());
  f << text;
}

int run_simulate(const SweepFlags& flags, bool quiet, bool no_plots) {
  const ExperimentConfig cfg = flags.resolve();
  std::filesystem::create_directories(cfg.out_dir);
  write_file(cfg.out_dir / "config.txt", qdsmds::sim::to_config_text(cfg));

  std::size_t last_pct = 101;
  auto progress = [&](std::size_t done, std::size_t total) {
    if (quiet) return;
    const std::size_t pct = 100 * done / total;
    if (pct != last_pct && (pct % 5 == 0 || done == total)) {
      std::fprintf(stderr, "\r%3zu%% (%zu/%zu trials)", pct, done, total);
      last_pct = pct;
    }
  };
  const auto result = qdsmds::sim::run_experiment(cfg, progress);
  if (!quiet) std::fputc('\n', stderr);

  std::ostringstream trials, summary;
  qdsmds::sim::write_trials_csv(trials, result.records);
  qdsmds::sim::write_summary_csv(summary, result.summary);
  write_file(cfg.out_dir / "trials.csv", trials.str());
  write_file(cfg.out_dir / "summary.csv", summary.str());

  std::printf("%-8s %8s %8s %12s %12s %6s\n", "scenario", "eps_deg", "sigma_d", "xi_smds", "xi_qdsmds", "fail");
  for (const auto& p : result.summary) {
    std::printf("%-8d %8.1f %8.2f %12.5f %12.5f %6zu%s\n", static_cast<int>(p.scenario), p.epsilon_deg, p.sigma_d,
                p.mean_smds, p.mean_qdsmds, p.failed, p.excluded ? "  excluded" : "");
  }
  if (!no_plots) {
    bool plottable = true;
    std::map<double, int> per_eps;
    for (const auto& p : result.summary) per_eps[p.epsilon_deg] += p.excluded ? 0 : 1;
    for (const auto& [e, n] : per_eps) plottable = plottable && n >= 2;
    if (plottable) {
      for (const auto& path : qdsmds::sim::emit_plots(result.summary, cfg.out_dir)) {
        std::printf("wrote %s\n", path.string().c_str());
      }
    } else {
      std::printf("skipping plots: every epsilon needs at least two sigma_d points\n");
    }
  }
  std::printf("wrote %s and %s\n", (cfg.out_dir / "trials.csv").string().c_str(),
              (cfg.out_dir / "summary.csv").string().c_str());
  return 0;
}

nlohmann::json points_json(const qdsmds::quatlin::RealMatrix& m) {
  auto arr = nlohmann::json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) arr.push_back({m(r, 0), m(r, 1), m(r, 2)});
  return arr;
}

int run_single_trial(const SweepFlags& flags, std::size_t trial) {
  const ExperimentConfig cfg = flags.resolve();
  const double sigma = cfg.sigma_d.front();
  const double eps = cfg.epsilon_deg.front();
  const auto noise = qdsmds::noise::NoiseParams::make(sigma, eps);

  const qdsmds::netgeom::NetworkLayout layout(cfg.anchors, qdsmds::sim::sample_targets(cfg, trial));
  const auto edges = qdsmds::netgeom::enumerate_edges(layout.num_anchors(), layout.num_targets());
  qdsmds::scenario::PipelineOptions options;
  options.solver.procrustes = cfg.procrustes;
  options.distance_redraw_per_pair = cfg.distance_redraw_per_pair;
  const auto outcome = qdsmds::scenario::run_scenario(cfg.scenario, layout, edges, noise, {cfg.seed, trial}, options);

  auto method = [](const qdsmds::solver::EstimateResult& r) {
    return nlohmann::json{{"xi", r.xi},
                          {"spectrum", r.diagnostics.spectrum},
                          {"gauge_residual", r.diagnostics.gauge_residual},
                          {"gauge_residual_before", r.diagnostics.gauge_residual_before},
                          {"k_energy", r.diagnostics.k_energy},
                          {"targets", points_json(r.x_hat)}};
  };
  nlohmann::json doc{{"scenario", static_cast<int>(cfg.scenario)},
                     {"seed", cfg.seed},
                     {"trial", trial},
                     {"sigma_d", sigma},
                     {"epsilon_deg", eps},
                     {"rho", std::isinf(noise.rho) ? nlohmann::json("inf") : nlohmann::json(noise.rho)},
                     {"edges", edges.size()},
                     {"true_targets", points_json(layout.target_matrix())},
                     {"smds", method(outcome.smds)},
                     {"qdsmds", method(outcome.qdsmds)}};
  std::cout << doc.dump(2) << '\n';
  return 0;
}

int run_calibrate(const std::string& list) {
  std::printf("%10s %16s\n", "eps_deg", "rho");
  for (double e : qdsmds::sim::parse_number_list(list)) {
    if (e == 0.0) {
      std::printf("%10.3f %16s\n", e, "inf");
    } else {
      std::printf("%10.3f %16.10g\n", e, qdsmds::noise::calibrate_rho(e));
    }
  }
  return 0;
}

int run_plot(const std::string& in, const std::string& out) {
  std::ifstream f(in);
  if (!f) throw qdsmds::Error(qdsmds::ErrorCode::kConfigError, "cannot read " + in);
  const auto summary = qdsmds::sim::summarize(qdsmds::sim::read_trials_csv(f));
  for (const auto& path : qdsmds::sim::emit_plots(summary, out)) std::printf("wrote %s\n", path.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quaternion-domain versus real super multidimensional scaling: 3D localization simulator"};
  app.require_subcommand(1);

  SweepFlags sim_flags;
  bool quiet = false;
  bool no_plots = false;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo sweep over epsilon x sigma_d");
  sim_flags.attach(simulate, true);
  simulate->add_flag("-q,--quiet", quiet, "No progress output");
  simulate->add_flag("--no-plots", no_plots, "Skip SVG output");

  SweepFlags one_flags;
  std::size_t trial = 0;
  auto* single = app.add_subcommand("single-trial", "Run one trial and print a JSON report");
  one_flags.attach(single, false);
  single->add_option("--trial", trial, "Trial index (selects the random streams)");

  std::string eps_list = "10,20,30,40,50";
  auto* calibrate = app.add_subcommand("calibrate-rho", "Print the Tikhonov concentration for each bounding angle");
  calibrate->add_option("--epsilon", eps_list, "Bounding angles [deg]");

  std::string plot_in;
  std::string plot_out = "plots";
  auto* plot = app.add_subcommand("plot", "Render SVG plots from a trials CSV");
  plot->add_option("--in", plot_in, "trials.csv from simulate")->required()->check(CLI::ExistingFile);
  plot->add_option("--out", plot_out, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) return run_simulate(sim_flags, quiet, no_plots);
    if (*single) return run_single_trial(one_flags, trial);
    if (*calibrate) return run_calibrate(eps_list);
    if (*plot) return run_plot(plot_in, plot_out);
  } catch (const qdsmds::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
