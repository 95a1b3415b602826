#include <benchmark/benchmark.h>

#include <utility>
#include <vector>

#include "irfit/dataio.hpp"
#include "irfit/model.hpp"
#include "irfit/objective.hpp"
#include "irfit/rng.hpp"

namespace {

const irfit::ModelParams kParams{265.0, 0.10, 0.12, 45.0, 15.0};

irfit::WorkloadSeries random_loads(int days) {
  irfit::Rng rng(1234);
  std::vector<double> loads(static_cast<std::size_t>(days));
  for (double& w : loads) w = rng.uniform() * 150.0;
  return irfit::WorkloadSeries(std::move(loads));
}

irfit::Dataset long_dataset() {
  irfit::SyntheticSpec spec;
  spec.days = 2000;
  spec.noise_sd = 2.0;
  spec.seed = 7;
  return irfit::make_synthetic_dataset(spec);
}

void BM_PredictSeries(benchmark::State& state) {
  const irfit::WorkloadSeries loads =
      random_loads(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(irfit::predict_series(kParams, loads));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PredictSeries)
    ->Arg(200)
    ->Arg(2000)
    ->Arg(20000)
    ->Complexity(benchmark::oN);

void BM_PredictDay(benchmark::State& state) {
  const irfit::WorkloadSeries loads = random_loads(2000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(irfit::predict_day(kParams, loads, 2000));
  }
}
BENCHMARK(BM_PredictDay);

void BM_Sse(benchmark::State& state) {
  const irfit::Dataset dataset = long_dataset();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        irfit::sse(kParams, dataset.loads, dataset.fit_obs));
  }
}
BENCHMARK(BM_Sse);

void BM_SseGradient(benchmark::State& state) {
  const irfit::Dataset dataset = long_dataset();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        irfit::sse_gradient(kParams, dataset.loads, dataset.fit_obs));
  }
}
BENCHMARK(BM_SseGradient);

}  // namespace
