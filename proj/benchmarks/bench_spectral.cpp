#include <benchmark/benchmark.h>

#include "qgraph/form_factor.hpp"
#include "qgraph/perron_frobenius.hpp"

using namespace qgraph;

namespace {

PFOperator complete_pf(int v) { return build_pf(build_propagation(build_complete_graph(v), VertexKind::dft)); }

void BM_DenseGap(benchmark::State& state) {
  const PFOperator f = complete_pf(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(spectral_gap(f, GapMethod::dense).gap);
  state.SetLabel("2B=" + std::to_string(f.dimension()));
}
BENCHMARK(BM_DenseGap)->Arg(8)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_PowerGap(benchmark::State& state) {
  const PFOperator f = complete_pf(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(spectral_gap(f, GapMethod::deflated_power).gap);
  state.SetLabel("2B=" + std::to_string(f.dimension()));
}
BENCHMARK(BM_PowerGap)->Arg(8)->Arg(16)->Arg(24)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_ResolventSolve(benchmark::State& state) {
  const PFOperator f = complete_pf(static_cast<int>(state.range(0)));
  const double gap = spectral_gap(f, GapMethod::deflated_power).gap;
  for (auto _ : state) {
    const PFResolvent res(f, gap);
    benchmark::DoNotOptimize(res.w_matrices(3).back().matrix(0, 0));
  }
  state.SetLabel("2B=" + std::to_string(f.dimension()));
}
BENCHMARK(BM_ResolventSolve)->Arg(8)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_FormFactorSample(benchmark::State& state) {
  const PropagationMatrix b = build_propagation(build_complete_graph(static_cast<int>(state.range(0))), VertexKind::dft);
  const BondLengths lengths{std::vector<double>(b.dimension() / 2, 1.0)};
  const auto method = state.range(1) == 0 ? TraceMethod::powers : TraceMethod::eigenphases;
  for (auto _ : state)
    benchmark::DoNotOptimize(form_factor(b, lengths, 2 * b.dimension(), 1, 1, {1, "", method}).k.back());
  state.SetLabel(std::string(state.range(1) == 0 ? "powers" : "eigenphases") + " 2B=" + std::to_string(b.dimension()));
}
BENCHMARK(BM_FormFactorSample)->Args({8, 0})->Args({8, 1})->Args({12, 0})->Args({12, 1})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
