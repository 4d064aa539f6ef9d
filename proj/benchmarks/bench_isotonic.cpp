#include <benchmark/benchmark.h>

#include "monosi/isotonic.hpp"
#include "monosi/simulate.hpp"

namespace {

monosi::ProjectedData projected(int64_t n) {
  const monosi::ModelSpec spec = monosi::ModelSpec::uniform_cubic();
  const monosi::Dataset data = monosi::generate(spec, n, 7);
  return monosi::project(data, spec.alpha0);
}

void BM_project(benchmark::State& state) {
  const monosi::ModelSpec spec = monosi::ModelSpec::uniform_cubic();
  const monosi::Dataset data = monosi::generate(spec, state.range(0), 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(monosi::project(data, spec.alpha0));
  }
  state.SetComplexityN(state.range(0));
}

void BM_fit_isotonic(benchmark::State& state) {
  const monosi::ProjectedData pd = projected(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(monosi::fit_isotonic(pd));
  }
  state.SetComplexityN(state.range(0));
}

}  // namespace

BENCHMARK(BM_project)->RangeMultiplier(4)->Range(250, 16000)->Complexity();
BENCHMARK(BM_fit_isotonic)->RangeMultiplier(4)->Range(250, 16000)->Complexity(benchmark::oN);
