#include <benchmark/benchmark.h>

#include "monosi/kernel.hpp"
#include "monosi/simulate.hpp"

namespace {

void BM_derivative_estimate(benchmark::State& state) {
  const monosi::ModelSpec spec = monosi::ModelSpec::uniform_cubic();
  const int64_t n = state.range(0);
  const monosi::Dataset data = monosi::generate(spec, n, 11);
  const monosi::ProjectedData pd = monosi::project(data, spec.alpha0);
  const monosi::IsotonicFit fit = monosi::fit_isotonic(pd);
  const monosi::JumpSet js = monosi::jumps(fit);
  const monosi::Bandwidth h = monosi::default_bandwidth(pd.z, n);
  const double lo = pd.z[0], hi = pd.z[pd.z.size() - 1];
  for (auto _ : state) {
    double sum = 0.0;
    for (Eigen::Index g = 0; g < pd.z.size(); ++g)
      sum += monosi::derivative_estimate(js, lo, hi, pd.z[g], h);
    benchmark::DoNotOptimize(sum);
  }
  state.SetComplexityN(n);
}

}  // namespace

BENCHMARK(BM_derivative_estimate)->RangeMultiplier(4)->Range(250, 16000)->Complexity();
