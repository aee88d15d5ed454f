// Per-point cost of each engine; a sweep cell costs about one of these.
#include "blockade/analytic.hpp"
#include "blockade/atlas.hpp"
#include "blockade/wavefunction.hpp"

#include <benchmark/benchmark.h>

using namespace blockade;

namespace {

JC jc_point() { return JC{0.3, -0.2, 1, 1e-3, 0, 0, 0.1, 0.01}; }
POL pol_point() { return POL{0.3, -0.2, 1, 1, 1e-5, 0, 0, 0.1, 0.01}; }

void BM_SteadyJC(benchmark::State& st) {
  const Truncation t{static_cast<int>(st.range(0))};
  for (auto _ : st) benchmark::DoNotOptimize(solve_steady(jc_point(), t).rho);
}
BENCHMARK(BM_SteadyJC)->Arg(5)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_SteadyPOL(benchmark::State& st) {
  const Truncation t{static_cast<int>(st.range(0))};
  for (auto _ : st) benchmark::DoNotOptimize(solve_steady(pol_point(), t).rho);
}
BENCHMARK(BM_SteadyPOL)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_RecursivePOL(benchmark::State& st) {
  const int order = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(low_drive_correlators(pol_point(), order));
}
BENCHMARK(BM_RecursivePOL)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMicrosecond);

void BM_WavefunctionPOL(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(wavefunction_coefficients(pol_point()).g2_a);
}
BENCHMARK(BM_WavefunctionPOL)->Unit(benchmark::kMicrosecond);

void BM_AnalyticJC(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(jc_g2(jc_point()));
}
BENCHMARK(BM_AnalyticJC);

void BM_JCFeatures(benchmark::State& st) {
  FeatureWindow w;
  w.samples = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(jc_feature_conditions(jc_point(), w));
}
BENCHMARK(BM_JCFeatures)->Arg(201)->Arg(801)->Unit(benchmark::kMillisecond);

void BM_AnalyticMap(benchmark::State& st) {
  const SweepConfig c = parse_config(
      "system = JC\ng = 1\ngamma_a = 0.1\ngamma_s = 0.01\naxis = omega_cav -2 2 101\naxis = omega_L -2 2 101\n");
  for (auto _ : st) benchmark::DoNotOptimize(run_sweep(c).cells.size());
}
BENCHMARK(BM_AnalyticMap)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
