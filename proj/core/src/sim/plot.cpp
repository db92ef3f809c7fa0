#include "qdsmds/sim/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "qdsmds/error.hpp"

namespace qdsmds::sim {
namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

// Round the axis maximum up to 1, 2 or 5 times a power of ten.
double nice_ceiling(double v) {
  if (!(v > 0.0)) return 1.0;
  const double p = std::pow(10.0, std::floor(std::log10(v)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * p >= v) return m * p;
  }
  return 10.0 * p;
}

const char* scenario_label(scenario::Scenario s) { return s == scenario::Scenario::kII ? "II" : "I"; }

}  // namespace

std::string render_svg(const std::vector<PointSummary>& group) {
  std::vector<const PointSummary*> pts;
  for (const auto& s : group)
    if (!s.excluded) pts.push_back(&s);
  if (pts.size() < 2) throw Error(ErrorCode::kEmptyDataset, "a plot needs at least two sweep points");
  std::sort(pts.begin(), pts.end(), [](auto* a, auto* b) { return a->sigma_d < b->sigma_d; });

  double xmax = 0.0, ymax = 0.0;
  for (const auto* p : pts) {
    xmax = std::max(xmax, p->sigma_d);
    ymax = std::max({ymax, p->mean_smds, p->mean_qdsmds});
  }
  xmax = nice_ceiling(xmax);
  ymax = nice_ceiling(ymax * 1.05);
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + pw * x / xmax; };
  auto sy = [&](double y) { return kTop + ph * (1.0 - y / ymax); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">Scenario "
      << scenario_label(pts.front()->scenario) << ", epsilon = " << fixed(pts.front()->epsilon_deg, 1)
      << " deg</text>\n";

  for (int t = 0; t <= 5; ++t) {
    const double xv = xmax * t / 5.0;
    const double yv = ymax * t / 5.0;
    svg << "<line x1=\"" << fixed(sx(xv), 2) << "\" y1=\"" << fixed(kTop, 2) << "\" x2=\"" << fixed(sx(xv), 2)
        << "\" y2=\"" << fixed(kTop + ph, 2) << "\" stroke=\"#ddd\"/>\n";
    svg << "<text x=\"" << fixed(sx(xv), 2) << "\" y=\"" << fixed(kTop + ph + 18, 2)
        << "\" text-anchor=\"middle\">" << fixed(xv, 2) << "</text>\n";
    svg << "<line x1=\"" << fixed(kLeft, 2) << "\" y1=\"" << fixed(sy(yv), 2) << "\" x2=\"" << fixed(kLeft + pw, 2)
        << "\" y2=\"" << fixed(sy(yv), 2) << "\" stroke=\"#ddd\"/>\n";
    svg << "<text x=\"" << fixed(kLeft - 8, 2) << "\" y=\"" << fixed(sy(yv) + 4, 2) << "\" text-anchor=\"end\">"
        << fixed(yv, 3) << "</text>\n";
  }
  svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 18
      << "\" text-anchor=\"middle\">sigma_d [m]</text>\n";
  svg << "<text transform=\"translate(18," << kTop + ph / 2
      << ") rotate(-90)\" text-anchor=\"middle\">mean xi [m]</text>\n";

  auto polyline = [&](const char* name, const char* color, const char* dash, auto value) {
    svg << "<polyline data-series=\"" << name << "\" fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"2\" stroke-dasharray=\"" << dash << "\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i > 0) svg << ' ';
      svg << fixed(sx(pts[i]->sigma_d), 2) << ',' << fixed(sy(value(*pts[i])), 2);
    }
    svg << "\"/>\n";
  };
  polyline("SMDS", "#1f77b4", "6,4", [](const PointSummary& p) { return p.mean_smds; });
  polyline("QD-SMDS", "#d62728", "none", [](const PointSummary& p) { return p.mean_qdsmds; });

  svg << "<line x1=\"" << kLeft + 12 << "\" y1=\"" << kTop + 14 << "\" x2=\"" << kLeft + 40 << "\" y2=\""
      << kTop + 14 << "\" stroke=\"#1f77b4\" stroke-width=\"2\" stroke-dasharray=\"6,4\"/>\n";
  svg << "<text x=\"" << kLeft + 46 << "\" y=\"" << kTop + 18 << "\">SMDS</text>\n";
  svg << "<line x1=\"" << kLeft + 12 << "\" y1=\"" << kTop + 32 << "\" x2=\"" << kLeft + 40 << "\" y2=\""
      << kTop + 32 << "\" stroke=\"#d62728\" stroke-width=\"2\"/>\n";
  svg << "<text x=\"" << kLeft + 46 << "\" y=\"" << kTop + 36 << "\">QD-SMDS</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

std::vector<std::filesystem::path> emit_plots(const std::vector<PointSummary>& summary,
                                              const std::filesystem::path& out_dir) {
  if (summary.empty()) throw Error(ErrorCode::kEmptyDataset, "no sweep points to plot");
  std::map<std::pair<int, double>, std::vector<PointSummary>> groups;
  for (const auto& s : summary) groups[{static_cast<int>(s.scenario), s.epsilon_deg}].push_back(s);

  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> written;
  for (const auto& [key, group] : groups) {
    const std::string svg = render_svg(group);
    const auto path = out_dir / ("scenario" + std::to_string(key.first) + "_eps" + fixed(key.second, 0) + ".svg");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::kConfigError, "cannot write " + path.string());
    out << svg;
    written.push_back(path);
  }
  return written;
}

}  // namespace qdsmds::sim
