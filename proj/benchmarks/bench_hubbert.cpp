#include <benchmark/benchmark.h>

#include <hubbert/bounds.hpp>
#include <hubbert/inference.hpp>
#include <hubbert/likelihood.hpp>
#include <hubbert/optimize.hpp>
#include <hubbert/process.hpp>

using namespace hubbert;

namespace {

PanelData study_panel(std::size_t paths) {
  const ProcessParams p{0.1, 0.45, 0.05, InitialDistribution::degenerate(100.0), 0.0};
  return simulate_paths(p, PathGrid::uniform(0.0, 1.0, 51), paths, 1, 1);
}

void BM_Objective(benchmark::State& state) {
  const SufficientStats stats(study_panel(static_cast<std::size_t>(state.range(0))));
  double eta = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(objective(stats, eta, 0.45, 0.0025));
    eta = eta == 0.1 ? 0.1000001 : 0.1;
  }
}
BENCHMARK(BM_Objective)->Arg(1)->Arg(50)->Arg(1000);

void BM_Simulate(benchmark::State& state) {
  const ProcessParams p{0.1, 0.45, 0.05, InitialDistribution::degenerate(100.0), 0.0};
  const PathGrid grid = PathGrid::uniform(0.0, 0.01, 5001);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_paths(p, grid, 50, ++seed, 1));
  state.SetItemsProcessed(state.iterations() * 50 * 5000);
}
BENCHMARK(BM_Simulate)->Unit(benchmark::kMillisecond);

void BM_SimulatedAnnealing(benchmark::State& state) {
  const PanelData data = study_panel(50);
  const SufficientStats stats(data);
  const SolutionBox box = build_box(data).box;
  const Objective g = [&](const Point3& p) { return objective(stats, p[0], p[1], p[2] * p[2]); };
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(simulated_annealing(g, box, SAConfig{}, ++seed));
}
BENCHMARK(BM_SimulatedAnnealing)->Unit(benchmark::kMillisecond);

void BM_Fit(benchmark::State& state) {
  const PanelData data = study_panel(50);
  FitOptions o;
  o.algorithm = state.range(0) ? Algorithm::VnsSa : Algorithm::SA;
  for (auto _ : state) {
    ++o.seed;
    benchmark::DoNotOptimize(fit(data, o));
  }
}
BENCHMARK(BM_Fit)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
