#include <benchmark/benchmark.h>

#include "monosi/estimators.hpp"
#include "monosi/simulate.hpp"

namespace {

monosi::FitConfig truth_started(const monosi::ModelSpec& spec) {
  monosi::FitConfig config;
  config.starts = monosi::Starts::given({spec.alpha0});
  return config;
}

void BM_fit_sse(benchmark::State& state) {
  const monosi::ModelSpec spec = monosi::ModelSpec::uniform_cubic();
  const monosi::Dataset data = monosi::generate(spec, state.range(0), 3);
  const monosi::FitConfig config = truth_started(spec);
  for (auto _ : state) {
    benchmark::DoNotOptimize(monosi::fit_sse(data, config));
  }
}

void BM_fit_ese(benchmark::State& state) {
  const monosi::ModelSpec spec = monosi::ModelSpec::uniform_cubic();
  const monosi::Dataset data = monosi::generate(spec, state.range(0), 3);
  const monosi::FitConfig config = truth_started(spec);
  for (auto _ : state) {
    benchmark::DoNotOptimize(monosi::fit_ese(data, config));
  }
}

void BM_fit_lflse(benchmark::State& state) {
  const monosi::ModelSpec spec = monosi::ModelSpec::normal_cubic(3);
  const monosi::Dataset data = monosi::generate(spec, state.range(0), 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(monosi::fit_lflse(data));
  }
}

void BM_rank_correlation(benchmark::State& state) {
  const monosi::ModelSpec spec = monosi::ModelSpec::uniform_cubic();
  const monosi::Dataset data = monosi::generate(spec, state.range(0), 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(monosi::rank_correlation(data, spec.alpha0));
  }
  state.SetComplexityN(state.range(0));
}

}  // namespace

BENCHMARK(BM_fit_sse)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_fit_ese)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_fit_lflse)->Arg(1000)->Arg(5000);
BENCHMARK(BM_rank_correlation)->RangeMultiplier(2)->Range(250, 2000)->Complexity(benchmark::oNSquared);
