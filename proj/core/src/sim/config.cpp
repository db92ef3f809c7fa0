#include "qdsmds/sim/config.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "qdsmds/error.hpp"
#include "qdsmds/sim/experiment.hpp"

namespace qdsmds::sim {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

[[noreturn]] void bad(std::string_view key, std::string_view value, std::string_view why) {
  throw Error(ErrorCode::kConfigError,
              std::string(key) + " = '" + std::string(value) + "': " + std::string(why));
}

double parse_double(std::string_view key, std::string_view text) {
  const std::string s(trim(text));
  if (s.empty()) bad(key, text, "expected a number");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) bad(key, text, "expected a number");
  return v;
}

std::uint64_t parse_unsigned(std::string_view key, std::string_view text) {
  const auto t = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty()) bad(key, text, "expected a non-negative integer");
  return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
  const auto t = trim(text);
  if (t == "true" || t == "1" || t == "on" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "off" || t == "no") return false;
  bad(key, text, "expected true/false");
}

Vec3 parse_vec3(std::string_view key, std::string_view text) {
  const auto parts = split(text, ',');
  if (parts.size() != 3) bad(key, text, "expected x,y,z");
  return {parse_double(key, parts[0]), parse_double(key, parts[1]), parse_double(key, parts[2])};
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    out += format_number(values[i]);
  }
  return out;
}

std::string vec3_text(const Vec3& v) {
  return format_number(v.x) + "," + format_number(v.y) + "," + format_number(v.z);
}

}  // namespace

std::vector<double> ExperimentConfig::default_sigma_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 15; ++i) grid.push_back(i / 5.0);
  return grid;
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw Error(ErrorCode::kConfigError, "trials must be >= 1");
  if (sigma_d.empty()) throw Error(ErrorCode::kConfigError, "sigma_d sweep is empty");
  if (epsilon_deg.empty()) throw Error(ErrorCode::kConfigError, "epsilon sweep is empty");
  if (anchors.size() < 4) throw Error(ErrorCode::kConfigError, "at least 4 anchors are required");
  if (num_targets < 1) throw Error(ErrorCode::kConfigError, "at least one target is required");
  if (!(room.x > 0.0 && room.y > 0.0 && room.z > 0.0)) throw Error(ErrorCode::kConfigError, "room must be positive");
  for (double s : sigma_d)
    if (s < 0.0) throw Error(ErrorCode::kConfigError, "sigma_d values must be >= 0");
  for (double e : epsilon_deg)
    if (e < 0.0 || e >= 162.0) throw Error(ErrorCode::kConfigError, "epsilon values must lie in [0, 162)");
  if (scenario != scenario::Scenario::kI && scenario != scenario::Scenario::kII) {
    throw Error(ErrorCode::kConfigError, "scenario must be 1 or 2");
  }
}

std::vector<double> parse_number_list(std::string_view text) {
  const auto t = trim(text);
  if (t.find(':') != std::string_view::npos) {
    const auto parts = split(t, ':');
    if (parts.size() != 3) bad("list", text, "range must be start:stop:step");
    const double start = parse_double("list", parts[0]);
    const double stop = parse_double("list", parts[1]);
    const double step = parse_double("list", parts[2]);
    if (!(step > 0.0) || stop < start) bad("list", text, "range needs step > 0 and stop >= start");
    std::vector<double> out;
    // Multiplying avoids accumulated drift; the tolerance keeps the endpoint.
    // Values are rounded to 12 significant digits so 0.2:1:0.2 yields 0.6,
    // not 0.6000000000000001.
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
    for (std::size_t i = 0; i <= count; ++i) {
      char buf[32];
      const auto res = std::to_chars(buf, buf + sizeof(buf), start + step * static_cast<double>(i),
                                     std::chars_format::general, 12);
      double v = 0.0;
      std::from_chars(buf, res.ptr, v);
      out.push_back(v);
    }
    return out;
  }
  std::vector<double> out;
  for (auto part : split(t, ',')) {
    if (part.empty()) continue;
    out.push_back(parse_double("list", part));
  }
  if (out.empty()) bad("list", text, "empty list");
  return out;
}

void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value) {
  if (key == "room") {
    config.room = parse_vec3(key, value);
  } else if (key == "anchors") {
    std::vector<Vec3> anchors;
    for (auto item : split(value, ';')) {
      if (!item.empty()) anchors.push_back(parse_vec3(key, item));
    }
    config.anchors = std::move(anchors);
  } else if (key == "targets") {
    config.num_targets = parse_unsigned(key, value);
  } else if (key == "scenario") {
    const auto v = parse_unsigned(key, value);
    if (v != 1 && v != 2) bad(key, value, "scenario must be 1 or 2");
    config.scenario = static_cast<scenario::Scenario>(v);
  } else if (key == "sigma_d") {
    config.sigma_d = parse_number_list(value);
  } else if (key == "epsilon") {
    config.epsilon_deg = parse_number_list(value);
  } else if (key == "trials") {
    config.trials = parse_unsigned(key, value);
  } else if (key == "seed") {
    config.seed = parse_unsigned(key, value);
  } else if (key == "workers") {
    config.workers = parse_unsigned(key, value);
  } else if (key == "procrustes") {
    config.procrustes = parse_bool(key, value);
  } else if (key == "distance_redraw_per_pair") {
    config.distance_redraw_per_pair = parse_bool(key, value);
  } else if (key == "out") {
    config.out_dir = std::string(trim(value));
  } else {
    throw Error(ErrorCode::kConfigError, "unknown key '" + std::string(key) + "'");
  }
}

ExperimentConfig parse_config(std::istream& in, ExperimentConfig base) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kConfigError, "line " + std::to_string(lineno) + ": expected key = value");
    }
    apply_setting(base, trim(view.substr(0, eq)), trim(view.substr(eq + 1)));
  }
  return base;
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfigError, "cannot open config " + path.string());
  return parse_config(in, std::move(base));
}

std::string to_config_text(const ExperimentConfig& config) {
  std::ostringstream out;
  out << "room = " << vec3_text(config.room) << '\n';
  out << "anchors = ";
  for (std::size_t i = 0; i < config.anchors.size(); ++i) {
    if (i > 0) out << "; ";
    out << vec3_text(config.anchors[i]);
  }
  out << '\n';
  out << "targets = " << config.num_targets << '\n';
  out << "scenario = " << static_cast<int>(config.scenario) << '\n';
  out << "sigma_d = " << join(config.sigma_d) << '\n';
  out << "epsilon = " << join(config.epsilon_deg) << '\n';
  out << "trials = " << config.trials << '\n';
  out << "seed = " << config.seed << '\n';
  out << "workers = " << config.workers << '\n';
  out << "procrustes = " << (config.procrustes ? "true" : "false") << '\n';
  out << "distance_redraw_per_pair = " << (config.distance_redraw_per_pair ? "true" : "false") << '\n';
  out << "out = " << config.out_dir.string() << '\n';
  return out.str();
}

}  // namespace qdsmds::sim
