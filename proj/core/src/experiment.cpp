#include "irfit/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "irfit/objective.hpp"
#include "irfit/stats.hpp"

namespace irfit {

namespace {

std::uint64_t algo_stream_seed(std::uint64_t trial_seed, AlgorithmId id) {
  return derive_seed(trial_seed, kAlgoStream,
                     static_cast<std::uint64_t>(id));
}

}  // namespace

std::string_view to_string(AlgorithmId id) {
  switch (id) {
    case AlgorithmId::Lbfgs:
      return "lbfgs";
    case AlgorithmId::DeRandom:
      return "de_random";
    case AlgorithmId::DeSeeded:
      return "de_seeded";
  }
  return "unknown";
}

std::optional<AlgorithmId> algorithm_from_string(std::string_view name) {
  std::string canon(name);
  std::replace(canon.begin(), canon.end(), '-', '_');
  if (canon == "lbfgs") return AlgorithmId::Lbfgs;
  if (canon == "de_random") return AlgorithmId::DeRandom;
  if (canon == "de_seeded") return AlgorithmId::DeSeeded;
  return std::nullopt;
}

void InitSamplingBox::validate() const {
  for (const auto& [lo, hi] : intervals) {
    if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) {
      throw std::invalid_argument(
          "sampling box intervals must be finite with lower < upper");
    }
  }
}

Bounds default_optimizer_bounds() {
  return Bounds({0.0, 0.01, 0.01, 1.0, 1.0},
                {1000.0, 1000.0, 1000.0, 120.0, 120.0});
}

void ExperimentConfig::validate() const {
  init_box.validate();
  optimizer_bounds.validate();
  if (optimizer_bounds.dimension() != ModelParams::kCount) {
    throw std::invalid_argument("optimizer bounds must cover all parameters");
  }
  if (!(seeded_relative_sd > 0.0)) {
    throw std::invalid_argument("seeded_relative_sd must be positive");
  }
  if (workers < 1) {
    throw std::invalid_argument("workers must be at least 1");
  }
}

ModelParams sample_initial(const InitSamplingBox& box, std::uint64_t rng_seed) {
  box.validate();
  Rng rng(rng_seed);
  std::array<double, ModelParams::kCount> values{};
  for (int i = 0; i < ModelParams::kCount; ++i) {
    const auto& [lo, hi] = box.intervals[static_cast<std::size_t>(i)];
    values[static_cast<std::size_t>(i)] = rng.uniform(lo, hi);
  }
  return ModelParams::from_array(values);
}

Population build_seeded_population(const ModelParams& initial, int size,
                                   double relative_sd, const Bounds& bounds,
                                   std::uint64_t rng_seed) {
  if (size < 1) {
    throw std::invalid_argument("population size must be at least 1");
  }
  if (!(relative_sd > 0.0)) {
    throw std::invalid_argument("relative_sd must be positive");
  }
  bounds.validate();
  const std::vector<double> center = initial.to_vector();
  if (!bounds.contains(center)) {
    throw std::domain_error("initial parameters lie outside the bounds");
  }

  Population pop;
  pop.members.reserve(static_cast<std::size_t>(size));
  pop.members.push_back(center);
  Rng rng(rng_seed);
  for (int m = 1; m < size; ++m) {
    std::vector<double> member(center.size());
    for (std::size_t j = 0; j < center.size(); ++j) {
      member[j] = rng.normal(center[j], relative_sd * std::fabs(center[j]));
      member[j] = std::clamp(member[j], bounds.lower[j], bounds.upper[j]);
    }
    pop.members.push_back(std::move(member));
  }
  return pop;
}

TrialRecord run_trial(const Dataset& dataset, AlgorithmId algorithm,
                      std::uint64_t trial_seed, const ExperimentConfig& config,
                      const std::optional<ModelParams>& initial_override) {
  config.validate();
  dataset.validate();

  const ModelParams initial =
      initial_override.has_value()
          ? *initial_override
          : sample_initial(config.init_box, derive_seed(trial_seed, kInitStream));

  const WorkloadSeries& loads = dataset.loads;
  const ObservationSet& fit_obs = dataset.fit_obs;
  const CostFn cost = [&](const std::vector<double>& x) {
    return sse(ModelParams::from_vector(x), loads, fit_obs);
  };

  OptimResult opt;
  try {
    const std::uint64_t algo_seed = algo_stream_seed(trial_seed, algorithm);
    const auto start = std::chrono::steady_clock::now();
    switch (algorithm) {
      case AlgorithmId::Lbfgs: {
        LbfgsConfig lc = config.lbfgs;
        lc.bounds = config.optimizer_bounds;
        const GradFn grad = [&](const std::vector<double>& x) {
          const auto g = sse_gradient(ModelParams::from_vector(x), loads, fit_obs);
          return std::vector<double>(g.begin(), g.end());
        };
        opt = lbfgs_minimize(cost, grad, initial.to_vector(), lc);
        break;
      }
      case AlgorithmId::DeRandom: {
        DeConfig dc = config.de;
        dc.bounds = config.optimizer_bounds;
        dc.rng_seed = algo_seed;
        opt = de_minimize(cost, dc);
        break;
      }
      case AlgorithmId::DeSeeded: {
        DeConfig dc = config.de;
        dc.bounds = config.optimizer_bounds;
        dc.rng_seed = algo_seed;
        const Population pop = build_seeded_population(
            initial, dc.population_size, config.seeded_relative_sd, dc.bounds,
            derive_seed(algo_seed, kSeededPopStream));
        opt = de_minimize(cost, dc, pop);
        break;
      }
    }
    const auto elapsed = std::chrono::steady_clock::now() - start;

    TrialRecord record;
    record.algorithm = algorithm;
    record.seed = trial_seed;
    record.initial_params = initial;
    record.final_params = ModelParams::from_vector(opt.best_vector);
    record.function_evaluations = opt.function_evaluations;
    record.converged = opt.converged;
    record.wall_time_s = std::max(
        std::chrono::duration<double>(elapsed).count(), 1e-9);

    const std::vector<double> predictions =
        predict_series(record.final_params, loads);
    std::vector<double> fit_predicted;
    fit_predicted.reserve(fit_obs.entries().size());
    for (const Observation& o : fit_obs.entries()) {
      fit_predicted.push_back(predictions[static_cast<std::size_t>(o.day) - 1]);
    }
    record.fit_r_squared = r_squared(fit_predicted, fit_obs.values());
    record.holdout_loss =
        dataset.holdout_obs.empty()
            ? std::numeric_limits<double>::quiet_NaN()
            : holdout_loss(record.final_params, loads, dataset.holdout_obs);
    return record;
  } catch (const std::domain_error& e) {
    throw std::domain_error("trial with " + std::string(to_string(algorithm)) +
                            ", seed " + std::to_string(trial_seed) + ": " +
                            e.what());
  }
}

BenchmarkReport run_benchmark(const Dataset& dataset, int n_trials,
                              const std::vector<AlgorithmId>& algorithms,
                              std::uint64_t master_seed,
                              const ExperimentConfig& config) {
  if (n_trials < 1) {
    throw std::invalid_argument("n_trials must be at least 1");
  }
  if (algorithms.empty()) {
    throw std::invalid_argument("at least one algorithm is required");
  }
  config.validate();
  dataset.validate();

  const int per_trial = static_cast<int>(algorithms.size());
  const int total = n_trials * per_trial;
  std::vector<std::optional<TrialRecord>> records(
      static_cast<std::size_t>(total));
  std::vector<std::optional<TrialFailure>> failures(
      static_cast<std::size_t>(total));

  std::atomic<int> next{0};
  const auto worker = [&] {
    for (;;) {
      const int index = next.fetch_add(1);
      if (index >= total) return;
      const int trial = index / per_trial;
      const AlgorithmId algorithm =
          algorithms[static_cast<std::size_t>(index % per_trial)];
      const std::uint64_t seed = trial_seed_for(master_seed, trial);
      try {
        TrialRecord record = run_trial(dataset, algorithm, seed, config);
        record.trial = trial;
        records[static_cast<std::size_t>(index)] = std::move(record);
      } catch (const std::exception& e) {
        failures[static_cast<std::size_t>(index)] =
            TrialFailure{algorithm, trial, seed, e.what()};
      }
    }
  };

  const int n_workers = std::min(config.workers, total);
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  BenchmarkReport report;
  report.n_trials = n_trials;
  report.algorithms = algorithms;
  report.master_seed = master_seed;
  report.records.reserve(static_cast<std::size_t>(total));
  for (int i = 0; i < total; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    if (records[ii].has_value()) {
      report.records.push_back(std::move(*records[ii]));
    } else if (failures[ii].has_value()) {
      report.failures.push_back(std::move(*failures[ii]));
    }
  }
  return report;
}

}  // namespace irfit
