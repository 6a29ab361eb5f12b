#include <benchmark/benchmark.h>

#include "sturmgraph/discrete_solver.hpp"
#include "sturmgraph/labels.hpp"
#include "sturmgraph/metric_solver.hpp"
#include "sturmgraph/nodal.hpp"

using namespace sturmgraph;

namespace {

ModelSpec golden_comb() { return ModelSpec::comb(1.0, 1.0, SturmianParameters::golden()); }

SolveOptions up_to(double k_max) {
  SolveOptions o;
  o.k_max = k_max;
  return o;
}

void BM_GeneralSolver(benchmark::State& state) {
  const ModelSpec m = golden_comb();
  const auto g = build_metric_truncation(m, model_word(m, state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(metric_spectrum_general(g, up_to(6.0)));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GeneralSolver)->Arg(5)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_CombFastSolver(benchmark::State& state) {
  const ModelSpec m = golden_comb();
  const Word w = model_word(m, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(comb_spectrum_fast(m, w, CutCondition::Kirchhoff, up_to(6.3)));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CombFastSolver)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond)->Complexity();

void BM_DiscreteSpectrum(benchmark::State& state) {
  const ModelSpec m = golden_comb();
  const auto g = build_discrete_truncation(m, model_word(m, state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(discrete_spectrum(g));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DiscreteSpectrum)->Arg(250)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond)->Complexity();

void BM_MetricIDS(benchmark::State& state) {
  const ModelSpec m = golden_comb();
  for (auto _ : state) benchmark::DoNotOptimize(ids_metric(m, {state.range(0), 2 * state.range(0)}, 40.0));
}
BENCHMARK(BM_MetricIDS)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_CountingIdentity(benchmark::State& state) {
  const ModelSpec m = golden_comb();
  const Word w = model_word(m, 8192);
  for (auto _ : state) benchmark::DoNotOptimize(verify_counting_lemma(m, w, static_cast<int>(state.range(0)), 3.32));
}
BENCHMARK(BM_CountingIdentity)->Arg(2)->Arg(8)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
