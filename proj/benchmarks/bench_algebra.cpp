#include <benchmark/benchmark.h>

#include "qgraph/coset.hpp"
#include "qgraph/random.hpp"
#include "qgraph/wick.hpp"

using namespace qgraph;

namespace {

GrassmannElement dense_even(int g, std::uint64_t seed) {
  Rng rng(mix_seed(seed));
  GrassmannElement e(g);
  for (std::uint32_t m = 0; m < e.size(); ++m)
    if (__builtin_popcount(m) % 2 == 0) e.set_coefficient(m, {uniform01(rng), uniform01(rng)});
  return e;
}

void BM_GrassmannProduct(benchmark::State& state) {
  const int g = static_cast<int>(state.range(0));
  const GrassmannElement a = dense_even(g, 1), b = dense_even(g, 2);
  for (auto _ : state) benchmark::DoNotOptimize((a * b).body());
  state.SetLabel("G=" + std::to_string(g));
}
BENCHMARK(BM_GrassmannProduct)->Arg(2)->Arg(4)->Arg(6)->Arg(8);

void BM_StrLog(benchmark::State& state) {
  const int g = static_cast<int>(state.range(0));
  const CosetPoint p = random_coset_point(g, 2, 3, CosetProfile::generic);
  const Supermatrix x = p.z * p.z_tilde;
  for (auto _ : state) benchmark::DoNotOptimize(str_log_one_minus(x).body());
  state.SetLabel("G=" + std::to_string(g));
}
BENCHMARK(BM_StrLog)->Arg(2)->Arg(4)->Arg(6);

void BM_CosetSuitePoint(benchmark::State& state) {
  CosetSuiteOptions opts;
  opts.generator_counts = {static_cast<int>(state.range(0))};
  opts.points = 1;
  for (auto _ : state) benchmark::DoNotOptimize(run_coset_suite(opts).size());
}
BENCHMARK(BM_CosetSuitePoint)->Arg(2)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_EnumerateTwoTrace(benchmark::State& state) {
  const TracePattern p = pattern_for(HigherOrderCase::m2n22);
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_contractions(p).terms.size());
}
BENCHMARK(BM_EnumerateTwoTrace)->Unit(benchmark::kMillisecond);

void BM_EnumerateEightSlots(benchmark::State& state) {
  const TracePattern p{{2, 2, 2}, {}};
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_contractions(p).terms.size());
}
BENCHMARK(BM_EnumerateEightSlots)->Unit(benchmark::kMillisecond);

}  // namespace
