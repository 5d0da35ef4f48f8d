#include <benchmark/benchmark.h>

#include "peglab/action.hpp"
#include "peglab/curve.hpp"
#include "peglab/fixtures.hpp"
#include "peglab/inscribe.hpp"
#include "peglab/spectral.hpp"
#include "peglab/sweep.hpp"

using namespace peglab;

static void BM_CurveEval(benchmark::State& state) {
  const auto c = fixtures::smoothed_square();
  double s = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(c.jet(s));
    s += 0.001;
  }
}
BENCHMARK(BM_CurveEval);

static void BM_FindRectangles(benchmark::State& state) {
  const auto c = state.range(0) == 0 ? fixtures::ellipse21() : fixtures::smoothed_square();
  for (auto _ : state) benchmark::DoNotOptimize(find_rectangles(c, 1.0));
}
BENCHMARK(BM_FindRectangles)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_ActionValue(benchmark::State& state) {
  const auto c = fixtures::smoothed_square();
  const auto r = find_rectangles(c, 1.0).front();
  for (auto _ : state) benchmark::DoNotOptimize(action_value(c, r));
}
BENCHMARK(BM_ActionValue)->Unit(benchmark::kMicrosecond);

static void BM_Sweep(benchmark::State& state) {
  const auto c = fixtures::ellipse21();
  for (auto _ : state) benchmark::DoNotOptimize(sweep_spectrum(c, 0.05, kPi - 0.05, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_Sweep)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_SpectralSelection(benchmark::State& state) {
  const auto d = sweep_spectrum(fixtures::ellipse21(), 0.05, kPi - 0.05, 64);
  for (auto _ : state) benchmark::DoNotOptimize(select_spectral_function(d));
}
BENCHMARK(BM_SpectralSelection)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
