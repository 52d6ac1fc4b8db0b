#include <benchmark/benchmark.h>

#include "cycleflux/cycle_flux.hpp"
#include "cycleflux/models.hpp"
#include "cycleflux/stochastic.hpp"
#include "cycleflux/sweep.hpp"

using namespace cycleflux;

namespace {

const TransitionNetwork& pump() {
  static const auto net = [] {
    PumpParams p;
    p.T1 = 1.2;
    return build_pump(p);
  }();
  return net;
}

const TransitionNetwork& transistor() {
  static const auto net = build_transistor({});
  return net;
}

void BM_EnumeratePump(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_cycles(pump()));
}
BENCHMARK(BM_EnumeratePump);

void BM_EnumerateTransistor(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_cycles(transistor()));
}
BENCHMARK(BM_EnumerateTransistor)->Unit(benchmark::kMillisecond);

void BM_PrincipalMinors(benchmark::State& state) {
  const auto lap = build_laplacian(transistor());
  for (auto _ : state) benchmark::DoNotOptimize(tree_theorem_steady_state(lap));
}
BENCHMARK(BM_PrincipalMinors)->Unit(benchmark::kMicrosecond);

void BM_SteadyStateGTH(benchmark::State& state) {
  const auto lap = build_laplacian(transistor());
  for (auto _ : state) benchmark::DoNotOptimize(solve_steady_state(transistor(), lap));
}
BENCHMARK(BM_SteadyStateGTH)->Unit(benchmark::kMicrosecond);

void BM_SteadyStateLU(benchmark::State& state) {
  const auto lap = build_laplacian(transistor());
  for (auto _ : state) benchmark::DoNotOptimize(solve_steady_state_lu(transistor(), lap));
}
BENCHMARK(BM_SteadyStateLU)->Unit(benchmark::kMicrosecond);

void BM_AllCycleFluxesTransistor(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(all_cycle_fluxes(transistor()));
}
BENCHMARK(BM_AllCycleFluxesTransistor)->Unit(benchmark::kMillisecond);

void BM_AnalyzePoint(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(analyze_point(transistor()));
}
BENCHMARK(BM_AnalyzePoint)->Unit(benchmark::kMillisecond);

void BM_GillespiePump(benchmark::State& state) {
  const double t = static_cast<double>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_and_count(pump(), t, ++seed));
}
BENCHMARK(BM_GillespiePump)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
