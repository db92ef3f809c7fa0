#include <doctest.h>

#include "qdsmds/sim/experiment.hpp"

using namespace qdsmds;
using namespace qdsmds::sim;

namespace {

PointSummary single_point(scenario::Scenario which, double sigma, double eps, std::size_t trials) {
  ExperimentConfig c;
  c.scenario = which;
  c.sigma_d = {sigma};
  c.epsilon_deg = {eps};
  c.trials = trials;
  c.seed = 1;
  const auto r = run_experiment(c);
  REQUIRE(r.summary.size() == 1);
  REQUIRE_FALSE(r.summary.front().excluded);
  return r.summary.front();
}

}  // namespace

TEST_CASE("scenario II with exact distances and 40 degree angles favours the quaternion estimator") {
  const auto p = single_point(scenario::Scenario::kII, 0.0, 40.0, 500);
  MESSAGE("SMDS " << p.mean_smds << "  QD-SMDS " << p.mean_qdsmds);
  CHECK(p.mean_qdsmds < p.mean_smds);
}

TEST_CASE("scenario II at 20 degrees and small distance noise favours the real estimator") {
  const auto p = single_point(scenario::Scenario::kII, 0.2, 20.0, 500);
  MESSAGE("SMDS " << p.mean_smds << "  QD-SMDS " << p.mean_qdsmds);
  CHECK(p.mean_smds <= p.mean_qdsmds);
}
