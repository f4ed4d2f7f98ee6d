#include <benchmark/benchmark.h>

#include <vector>

#include "dssyk/edlab.hpp"
#include "dssyk/freeconv.hpp"
#include "dssyk/moments.hpp"
#include "dssyk/qhermite.hpp"

static void BM_ReducedMoment(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(dssyk::moments::reduced_moment(n));
}
BENCHMARK(BM_ReducedMoment)->DenseRange(4, 14, 2)->Unit(benchmark::kMillisecond);

static void BM_ReducedMomentGf(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(dssyk::moments::reduced_moment_gf(n));
}
BENCHMARK(BM_ReducedMomentGf)->DenseRange(4, 10, 2)->Unit(benchmark::kMillisecond);

static void BM_Linearization(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const std::vector<int> degrees{d, d, d, d};
  for (auto _ : state) benchmark::DoNotOptimize(dssyk::qhermite::linearization(degrees));
}
BENCHMARK(BM_Linearization)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

static void BM_SampleSpectra(benchmark::State& state) {
  dssyk::ed::ModelParams p;
  p.N = static_cast<int>(state.range(0));
  p.p = 4;
  p.k = 2;
  p.theta = 3.0;
  p.samples = 4;
  p.seed = 12345;
  for (auto _ : state) benchmark::DoNotOptimize(dssyk::ed::sample_spectra(p));
}
BENCHMARK(BM_SampleSpectra)->DenseRange(8, 16, 4)->UseRealTime()->Unit(benchmark::kMillisecond);

static void BM_FreeConvolution(benchmark::State& state) {
  const int grid = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(dssyk::freeconv::semicircle_plus_atomic(0.25, 3.0, grid));
}
BENCHMARK(BM_FreeConvolution)->Arg(250)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
