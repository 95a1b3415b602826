#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "irfit/dataio.hpp"
#include "irfit/de.hpp"
#include "irfit/lbfgs.hpp"
#include "irfit/model.hpp"
#include "irfit/rng.hpp"

namespace irfit {

enum class AlgorithmId { Lbfgs, DeRandom, DeSeeded };

inline constexpr std::array<AlgorithmId, 3> kAllAlgorithms = {
    AlgorithmId::Lbfgs, AlgorithmId::DeRandom, AlgorithmId::DeSeeded};

std::string_view to_string(AlgorithmId id);
// Accepts the canonical names (lbfgs, de_random, de_seeded) with '-' and '_'
// interchangeable; returns nullopt otherwise.
std::optional<AlgorithmId> algorithm_from_string(std::string_view name);

// Per-parameter uniform sampling intervals for initial parameter guesses.
struct InitSamplingBox {
  std::array<std::pair<double, double>, ModelParams::kCount> intervals{
      {{240.0, 340.0}, {0.01, 10.0}, {0.01, 10.0}, {1.0, 100.0}, {1.0, 100.0}}};

  // Throws std::invalid_argument unless lower < upper per parameter.
  void validate() const;
};

Bounds default_optimizer_bounds();

// Everything a trial needs besides the dataset: sampling box, shared
// optimizer bounds, per-algorithm configs, and the benchmark worker count.
// The bounds members inside lbfgs/de configs are overwritten with
// optimizer_bounds when a trial runs, so there is one source of truth.
struct ExperimentConfig {
  InitSamplingBox init_box;
  Bounds optimizer_bounds = default_optimizer_bounds();
  LbfgsConfig lbfgs;
  DeConfig de;
  double seeded_relative_sd = 0.05;
  int workers = 1;

  void validate() const;
};

struct TrialRecord {
  AlgorithmId algorithm = AlgorithmId::Lbfgs;
  int trial = 0;
  std::uint64_t seed = 0;  // the derived per-trial seed
  // The uniform draw shared by lbfgs (start point) and de_seeded (population
  // center) for this trial; recorded for de_random too, which ignores it.
  ModelParams initial_params;
  ModelParams final_params;
  double fit_r_squared = 0.0;
  double holdout_loss = 0.0;
  int function_evaluations = 0;
  double wall_time_s = 0.0;
  bool converged = false;
};

struct TrialFailure {
  AlgorithmId algorithm = AlgorithmId::Lbfgs;
  int trial = 0;
  std::uint64_t seed = 0;
  std::string message;
};

struct BenchmarkReport {
  std::vector<TrialRecord> records;
  std::vector<TrialFailure> failures;
  int n_trials = 0;
  std::vector<AlgorithmId> algorithms;
  std::uint64_t master_seed = 0;
};

// Stream indices hung off each trial seed; exposed so tests can reproduce
// the exact derivation chain.
inline constexpr std::uint64_t kInitStream = 1;
inline constexpr std::uint64_t kAlgoStream = 2;
inline constexpr std::uint64_t kSeededPopStream = 3;

inline std::uint64_t trial_seed_for(std::uint64_t master_seed, int trial) {
  return derive_seed(master_seed, static_cast<std::uint64_t>(trial));
}

// One uniform draw per parameter from the box, in storage order.
ModelParams sample_initial(const InitSamplingBox& box, std::uint64_t rng_seed);

// Member 0 is exactly `initial`; the rest perturb each coordinate with
// Normal(initial_j, relative_sd * |initial_j|) and clamp into bounds.
// Energies are left unevaluated. Throws std::domain_error when initial
// violates the bounds.
Population build_seeded_population(const ModelParams& initial, int size,
                                   double relative_sd, const Bounds& bounds,
                                   std::uint64_t rng_seed);

// Fits the dataset once with one algorithm. lbfgs starts from the trial's
// sampled initial, de_seeded builds its population around that same initial,
// de_random initializes uniformly within the optimizer bounds. wall_time_s
// covers the optimizer call only. initial_override replaces the sampled
// initial when supplied. Optimizer domain errors propagate wrapped with the
// trial context.
TrialRecord run_trial(const Dataset& dataset, AlgorithmId algorithm,
                      std::uint64_t trial_seed,
                      const ExperimentConfig& config = {},
                      const std::optional<ModelParams>& initial_override =
                          std::nullopt);

// n_trials x algorithms trial grid. Trial i of every algorithm shares one
// derived seed, so lbfgs and de_seeded stay paired. Trials run on
// config.workers threads; records and failures come back in (trial,
// algorithm) order regardless of scheduling, and everything except wall
// times is a pure function of (dataset, config, master_seed). A failed trial
// is recorded and the benchmark continues.
BenchmarkReport run_benchmark(const Dataset& dataset, int n_trials,
                              const std::vector<AlgorithmId>& algorithms,
                              std::uint64_t master_seed,
                              const ExperimentConfig& config = {});

}  // namespace irfit
