#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "irfit/optim.hpp"
#include "irfit/rng.hpp"

namespace irfit {

enum class DeStrategy { Best1Bin, Rand1Bin };

struct DeConfig {
  int max_iterations = 1000;
  int population_size = 20;
  double tolerance = 1e-11;
  // The differential weight is redrawn uniformly from this half-open range
  // once per generation (dithering).
  std::pair<double, double> mutation_range{0.5, 1.0};
  double recombination = 0.7;  // crossover probability
  Bounds bounds;
  std::uint64_t rng_seed = 0;
  DeStrategy strategy = DeStrategy::Best1Bin;

  // Throws std::invalid_argument on population_size < 4, a mutation range
  // outside 0 <= lo <= hi <= 2, recombination outside [0, 1], nonpositive
  // iteration budget, or invalid bounds.
  void validate() const;
};

// A candidate population with its evaluated costs. energies[i] is the cost of
// members[i]; both vectors have equal length once evaluated.
struct Population {
  std::vector<std::vector<double>> members;
  std::vector<double> energies;

  int size() const { return static_cast<int>(members.size()); }
  int dimension() const {
    return members.empty() ? 0 : static_cast<int>(members.front().size());
  }
  // Index of the lowest energy; ties resolve to the lowest index.
  int best_index() const;
};

// Advances one generation: all donors are drawn from the incoming population,
// one trial vector is built per member in index order (binomial crossover
// with a guaranteed crossover dimension, out-of-bound components resampled
// uniformly), then greedy one-to-one selection with ties keeping the trial.
// Calls cost exactly population-size times.
Population de_generation_step(const Population& population, const CostFn& cost,
                              const DeConfig& config, Rng& rng);

// Minimizes cost over config.bounds. The population starts from
// initial_population when given (it must match the configured size and
// dimension and lie inside the bounds) and otherwise is sampled uniformly
// within the bounds. Converged means the population energies collapsed:
// std(energies) <= tolerance * |mean(energies)|.
OptimResult de_minimize(
    const CostFn& cost, const DeConfig& config,
    const std::optional<Population>& initial_population = std::nullopt);

}  // namespace irfit
