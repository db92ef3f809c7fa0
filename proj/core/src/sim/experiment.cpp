#include "qdsmds/sim/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

#include "qdsmds/error.hpp"

namespace qdsmds::sim {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

constexpr const char* kTrialHeader =
    "scenario,epsilon_deg,sigma_d,trial,status,xi_smds,xi_qdsmds,qd_sigma1,qd_sigma2_ratio,"
    "smds_eig4_ratio,k_energy,gauge_residual_smds,gauge_residual_qdsmds,reason";

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      out.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  out.push_back(field);
  return out;
}

double parse_field(const std::string& s) {
  if (s.empty()) return kNaN;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::kConfigError, "malformed number '" + s + "' in trials CSV");
  }
  return v;
}

// Reasons end up in a CSV cell.
std::string sanitize(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return {};
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return ec == std::errc{} ? std::string(buf, ptr) : std::string{};
}

std::vector<Vec3> sample_targets(const ExperimentConfig& config, std::size_t trial) {
  noise::RngStream rng(config.seed, trial, noise::Purpose::kTargets);
  std::vector<Vec3> targets(config.num_targets);
  for (auto& t : targets) {
    t.x = config.room.x * rng.uniform();
    t.y = config.room.y * rng.uniform();
    t.z = config.room.z * rng.uniform();
  }
  return targets;
}

TrialRecord run_trial(const ExperimentConfig& config, const noise::NoiseParams& noise, std::size_t trial) {
  TrialRecord rec;
  rec.scenario = config.scenario;
  rec.epsilon_deg = noise.epsilon_deg;
  rec.sigma_d = noise.sigma_d;
  rec.trial = trial;
  try {
    const netgeom::NetworkLayout layout(config.anchors, sample_targets(config, trial));
    const auto edges = netgeom::enumerate_edges(layout.num_anchors(), layout.num_targets());
    scenario::PipelineOptions options;
    options.solver.procrustes = config.procrustes;
    options.distance_redraw_per_pair = config.distance_redraw_per_pair;
    const auto outcome = scenario::run_scenario(config.scenario, layout, edges, noise, {config.seed, trial}, options);

    rec.ok = std::isfinite(outcome.xi_smds()) && std::isfinite(outcome.xi_qdsmds());
    rec.xi_smds = outcome.xi_smds();
    rec.xi_qdsmds = outcome.xi_qdsmds();
    const auto& qs = outcome.qdsmds.diagnostics.spectrum;
    const auto& rs = outcome.smds.diagnostics.spectrum;
    rec.qd_sigma1 = qs.empty() ? kNaN : qs[0];
    rec.qd_sigma2_ratio = qs.size() > 1 && qs[0] > 0.0 ? qs[1] / qs[0] : kNaN;
    rec.smds_eig4_ratio = rs.size() > 3 && rs[0] > 0.0 ? rs[3] / rs[0] : kNaN;
    rec.k_energy = outcome.qdsmds.diagnostics.k_energy;
    rec.gauge_residual_smds = outcome.smds.diagnostics.gauge_residual;
    rec.gauge_residual_qdsmds = outcome.qdsmds.diagnostics.gauge_residual;
    if (!rec.ok) rec.reason = "non-finite estimate";
  } catch (const Error& e) {
    rec.ok = false;
    rec.reason = sanitize(e.what());
  }
  if (!rec.ok) {
    rec.xi_smds = rec.xi_qdsmds = kNaN;
    rec.qd_sigma1 = rec.qd_sigma2_ratio = rec.smds_eig4_ratio = kNaN;
    rec.k_energy = rec.gauge_residual_smds = rec.gauge_residual_qdsmds = kNaN;
  }
  return rec;
}

ExperimentResult run_experiment(const ExperimentConfig& config, const ProgressFn& progress) {
  config.validate();

  std::vector<double> eps = config.epsilon_deg;
  std::vector<double> sig = config.sigma_d;
  std::sort(eps.begin(), eps.end());
  eps.erase(std::unique(eps.begin(), eps.end()), eps.end());
  std::sort(sig.begin(), sig.end());
  sig.erase(std::unique(sig.begin(), sig.end()), sig.end());

  std::vector<noise::NoiseParams> points;
  for (double e : eps) {
    const double rho = noise::NoiseParams::make(0.0, e).rho;
    for (double s : sig) {
      noise::NoiseParams p;
      p.sigma_d = s;
      p.epsilon_deg = e;
      p.rho = rho;
      points.push_back(p);
    }
  }

  const std::size_t total = points.size() * config.trials;
  ExperimentResult result;
  result.records.resize(total);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t job = next.fetch_add(1);
      if (job >= total) return;
      const std::size_t point = job / config.trials;
      const std::size_t trial = job % config.trials;
      result.records[job] = run_trial(config, points[point], trial);
      const std::size_t finished = done.fetch_add(1) + 1;
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(finished, total);
      }
    }
  };

  const std::size_t nthreads = std::max<std::size_t>(1, std::min(config.workers, total));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(nthreads);
    for (std::size_t i = 0; i < nthreads; ++i) pool.emplace_back(worker);
  }

  result.summary = summarize(result.records);
  return result;
}

std::vector<PointSummary> summarize(const std::vector<TrialRecord>& records) {
  using Key = std::tuple<int, double, double>;
  std::map<Key, std::vector<const TrialRecord*>> groups;
  for (const auto& r : records) groups[{static_cast<int>(r.scenario), r.epsilon_deg, r.sigma_d}].push_back(&r);

  std::vector<PointSummary> out;
  for (const auto& [key, recs] : groups) {
    PointSummary s;
    s.scenario = static_cast<scenario::Scenario>(std::get<0>(key));
    s.epsilon_deg = std::get<1>(key);
    s.sigma_d = std::get<2>(key);
    double sum_a = 0.0, sum_b = 0.0;
    for (const auto* r : recs) {
      if (r->ok) {
        ++s.ok;
        sum_a += r->xi_smds;
        sum_b += r->xi_qdsmds;
      } else {
        ++s.failed;
      }
    }
    if (s.ok > 0) {
      s.mean_smds = sum_a / static_cast<double>(s.ok);
      s.mean_qdsmds = sum_b / static_cast<double>(s.ok);
      double var_a = 0.0, var_b = 0.0;
      for (const auto* r : recs) {
        if (!r->ok) continue;
        var_a += (r->xi_smds - s.mean_smds) * (r->xi_smds - s.mean_smds);
        var_b += (r->xi_qdsmds - s.mean_qdsmds) * (r->xi_qdsmds - s.mean_qdsmds);
      }
      const double denom = s.ok > 1 ? static_cast<double>(s.ok - 1) : 1.0;
      s.std_smds = std::sqrt(var_a / denom);
      s.std_qdsmds = std::sqrt(var_b / denom);
    } else {
      s.mean_smds = s.mean_qdsmds = s.std_smds = s.std_qdsmds = kNaN;
    }
    const std::size_t n = s.ok + s.failed;
    s.excluded = s.ok == 0 || static_cast<double>(s.failed) > 0.01 * static_cast<double>(n);
    out.push_back(s);
  }
  return out;
}

void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
  out << kTrialHeader << '\n';
  for (const auto& r : records) {
    out << static_cast<int>(r.scenario) << ',' << format_number(r.epsilon_deg) << ',' << format_number(r.sigma_d)
        << ',' << r.trial << ',' << (r.ok ? "ok" : "failed") << ',' << format_number(r.xi_smds) << ','
        << format_number(r.xi_qdsmds) << ',' << format_number(r.qd_sigma1) << ','
        << format_number(r.qd_sigma2_ratio) << ',' << format_number(r.smds_eig4_ratio) << ','
        << format_number(r.k_energy) << ',' << format_number(r.gauge_residual_smds) << ','
        << format_number(r.gauge_residual_qdsmds) << ',' << r.reason << '\n';
  }
}

void write_summary_csv(std::ostream& out, const std::vector<PointSummary>& summary) {
  out << "scenario,epsilon_deg,sigma_d,ok,failed,mean_xi_smds,std_xi_smds,mean_xi_qdsmds,std_xi_qdsmds,excluded\n";
  for (const auto& s : summary) {
    out << static_cast<int>(s.scenario) << ',' << format_number(s.epsilon_deg) << ','
        << format_number(s.sigma_d) << ',' << s.ok << ',' << s.failed << ',' << format_number(s.mean_smds) << ','
        << format_number(s.std_smds) << ',' << format_number(s.mean_qdsmds) << ','
        << format_number(s.std_qdsmds) << ',' << (s.excluded ? "true" : "false") << '\n';
  }
}

std::vector<TrialRecord> read_trials_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kEmptyDataset, "trials CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTrialHeader) throw Error(ErrorCode::kConfigError, "unexpected trials CSV header");
  std::vector<TrialRecord> out;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv_line(line);
    if (f.size() != 14) throw Error(ErrorCode::kConfigError, "trials CSV row has wrong field count");
    TrialRecord r;
    const double scen = parse_field(f[0]);
    r.scenario = scen == 2.0 ? scenario::Scenario::kII : scenario::Scenario::kI;
    r.epsilon_deg = parse_field(f[1]);
    r.sigma_d = parse_field(f[2]);
    r.trial = static_cast<std::size_t>(parse_field(f[3]));
    r.ok = f[4] == "ok";
    r.xi_smds = parse_field(f[5]);
    r.xi_qdsmds = parse_field(f[6]);
    r.qd_sigma1 = parse_field(f[7]);
    r.qd_sigma2_ratio = parse_field(f[8]);
    r.smds_eig4_ratio = parse_field(f[9]);
    r.k_energy = parse_field(f[10]);
    r.gauge_residual_smds = parse_field(f[11]);
    r.gauge_residual_qdsmds = parse_field(f[12]);
    r.reason = f[13];
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace qdsmds::sim
