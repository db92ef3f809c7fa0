#include <benchmark/benchmark.h>

#include "qdsmds/kernel.hpp"
#include "qdsmds/netgeom.hpp"
#include "qdsmds/quatlin/hermitian_eig.hpp"
#include "qdsmds/quatlin/qsvd.hpp"
#include "qdsmds/sim/experiment.hpp"

using namespace qdsmds;

namespace {

quatlin::QuatMatrix reference_kernel() {
  sim::ExperimentConfig c;
  const netgeom::NetworkLayout layout(c.anchors, sim::sample_targets(c, 0));
  const auto edges = netgeom::enumerate_edges(layout.num_anchors(), layout.num_targets());
  return kernel::build_quat_gek(kernel::exact_observations(netgeom::edge_vectors(layout.nodes(), edges)));
}

void BM_HermitianEigFull(benchmark::State& state) {
  quatlin::EigenOptions opts;
  opts.method = static_cast<quatlin::EigenMethod>(state.range(0));
  const auto adj = quatlin::to_adjoint(reference_kernel());
  for (auto _ : state) benchmark::DoNotOptimize(quatlin::hermitian_eig(adj, opts));
}
BENCHMARK(BM_HermitianEigFull)
    ->Arg(static_cast<int>(quatlin::EigenMethod::kTridiagonalQL))
    ->Arg(static_cast<int>(quatlin::EigenMethod::kJacobi))
    ->Unit(benchmark::kMillisecond);

void BM_QsvdDominant(benchmark::State& state) {
  const auto k = reference_kernel();
  for (auto _ : state) benchmark::DoNotOptimize(quatlin::qsvd_dominant(k));
}
BENCHMARK(BM_QsvdDominant)->Unit(benchmark::kMillisecond);

void BM_Trial(benchmark::State& state) {
  sim::ExperimentConfig c;
  c.scenario = static_cast<scenario::Scenario>(state.range(0));
  const auto noise = noise::NoiseParams::make(1.0, 20.0);
  std::size_t trial = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sim::run_trial(c, noise, trial++));
}
BENCHMARK(BM_Trial)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
