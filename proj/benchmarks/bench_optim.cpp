#include <benchmark/benchmark.h>

#include <cstddef>
#include <vector>

#include "irfit/dataio.hpp"
#include "irfit/de.hpp"
#include "irfit/experiment.hpp"
#include "irfit/lbfgs.hpp"
#include "irfit/model.hpp"
#include "irfit/objective.hpp"
#include "irfit/rng.hpp"

namespace {

irfit::Dataset stock_dataset() {
  irfit::SyntheticSpec spec;
  spec.noise_sd = 2.0;
  spec.seed = 7;
  return irfit::make_synthetic_dataset(spec);
}

irfit::CostFn make_cost(const irfit::Dataset& dataset) {
  return [&dataset](const std::vector<double>& x) {
    return irfit::sse(irfit::ModelParams::from_vector(x), dataset.loads,
                      dataset.fit_obs);
  };
}

irfit::GradFn make_grad(const irfit::Dataset& dataset) {
  return [&dataset](const std::vector<double>& x) {
    const auto g = irfit::sse_gradient(irfit::ModelParams::from_vector(x),
                                       dataset.loads, dataset.fit_obs);
    return std::vector<double>(g.begin(), g.end());
  };
}

irfit::Population uniform_population(const irfit::DeConfig& config,
                                     const irfit::CostFn& cost) {
  irfit::Rng rng(99);
  irfit::Population population;
  population.members.resize(static_cast<std::size_t>(config.population_size));
  for (auto& member : population.members) {
    member.resize(config.bounds.lower.size());
    for (std::size_t j = 0; j < member.size(); ++j) {
      member[j] = config.bounds.lower[j] +
                  rng.uniform() * (config.bounds.upper[j] -
                                   config.bounds.lower[j]);
    }
  }
  population.energies.reserve(population.members.size());
  for (const auto& member : population.members) {
    population.energies.push_back(cost(member));
  }
  return population;
}

void BM_DeGenerationStep(benchmark::State& state) {
  const irfit::Dataset dataset = stock_dataset();
  const irfit::CostFn cost = make_cost(dataset);
  const irfit::ExperimentConfig experiment;
  irfit::DeConfig config = experiment.de;
  config.bounds = experiment.optimizer_bounds;
  const irfit::Population population = uniform_population(config, cost);
  irfit::Rng rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        irfit::de_generation_step(population, cost, config, rng));
  }
}
BENCHMARK(BM_DeGenerationStep);

void BM_DeMinimizeShort(benchmark::State& state) {
  const irfit::Dataset dataset = stock_dataset();
  const irfit::CostFn cost = make_cost(dataset);
  const irfit::ExperimentConfig experiment;
  irfit::DeConfig config = experiment.de;
  config.bounds = experiment.optimizer_bounds;
  config.max_iterations = 50;
  config.rng_seed = 42;
  for (auto _ : state) {
    benchmark::DoNotOptimize(irfit::de_minimize(cost, config));
  }
}
BENCHMARK(BM_DeMinimizeShort);

void BM_LbfgsFit(benchmark::State& state) {
  const irfit::Dataset dataset = stock_dataset();
  const irfit::CostFn cost = make_cost(dataset);
  const irfit::GradFn grad = make_grad(dataset);
  const irfit::ExperimentConfig experiment;
  irfit::LbfgsConfig config = experiment.lbfgs;
  config.bounds = experiment.optimizer_bounds;
  const std::vector<double> x0 = {280.0, 1.0, 1.0, 30.0, 10.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(irfit::lbfgs_minimize(cost, grad, x0, config));
  }
}
BENCHMARK(BM_LbfgsFit);

}  // namespace
