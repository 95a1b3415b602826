#include "irfit/de.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace irfit {

namespace {

bool spread_converged(const std::vector<double>& energies, double tolerance) {
  const auto n = static_cast<double>(energies.size());
  double mean = 0.0;
  for (double e : energies) mean += e;
  mean /= n;
  double var = 0.0;
  for (double e : energies) {
    const double d = e - mean;
    var += d * d;
  }
  return std::sqrt(var / n) <= tolerance * std::fabs(mean);
}

int draw_distinct(Rng& rng, int n, std::initializer_list<int> taken) {
  for (;;) {
    const int r = rng.uniform_int(n);
    bool clash = false;
    for (int t : taken) clash = clash || (r == t);
    if (!clash) return r;
  }
}

}  // namespace

void DeConfig::validate() const {
  if (max_iterations < 1) {
    throw std::invalid_argument("max_iterations must be at least 1");
  }
  if (population_size < 4) {
    throw std::invalid_argument(
        "population_size must be at least 4 to provide distinct donors");
  }
  if (!(mutation_range.first >= 0.0 &&
        mutation_range.first <= mutation_range.second &&
        mutation_range.second <= 2.0)) {
    throw std::invalid_argument("mutation range must satisfy 0 <= lo <= hi <= 2");
  }
  if (!(recombination >= 0.0 && recombination <= 1.0)) {
    throw std::invalid_argument("recombination must lie in [0, 1]");
  }
  if (!(tolerance >= 0.0)) {
    throw std::invalid_argument("tolerance must be nonnegative");
  }
  bounds.validate();
}

int Population::best_index() const {
  if (energies.size() != members.size() || energies.empty()) {
    throw std::invalid_argument("population energies are not evaluated");
  }
  int best = 0;
  for (int i = 1; i < size(); ++i) {
    if (energies[static_cast<std::size_t>(i)] <
        energies[static_cast<std::size_t>(best)]) {
      best = i;
    }
  }
  return best;
}

Population de_generation_step(const Population& population, const CostFn& cost,
                              const DeConfig& config, Rng& rng) {
  config.validate();
  const int np = population.size();
  const int dim = population.dimension();
  if (np < 4) {
    throw std::invalid_argument("population must have at least 4 members");
  }
  if (population.energies.size() != population.members.size()) {
    throw std::invalid_argument("population energies are not evaluated");
  }
  if (dim != config.bounds.dimension()) {
    throw std::invalid_argument(
        "population dimension does not match the bounds");
  }

  const double f =
      rng.uniform(config.mutation_range.first, config.mutation_range.second);
  const int best = population.best_index();

  std::vector<std::vector<double>> trials;
  trials.reserve(static_cast<std::size_t>(np));
  for (int i = 0; i < np; ++i) {
    int base;
    if (config.strategy == DeStrategy::Rand1Bin) {
      base = draw_distinct(rng, np, {i});
    } else {
      base = best;
    }
    const int r1 = draw_distinct(rng, np, {i, base});
    const int r2 = draw_distinct(rng, np, {i, base, r1});

    const auto& base_v = population.members[static_cast<std::size_t>(base)];
    const auto& r1_v = population.members[static_cast<std::size_t>(r1)];
    const auto& r2_v = population.members[static_cast<std::size_t>(r2)];

    std::vector<double> trial = population.members[static_cast<std::size_t>(i)];
    const int j_rand = rng.uniform_int(dim);
    for (int j = 0; j < dim; ++j) {
      const auto ji = static_cast<std::size_t>(j);
      if (j == j_rand || rng.uniform() < config.recombination) {
        trial[ji] = base_v[ji] + f * (r1_v[ji] - r2_v[ji]);
      }
      if (trial[ji] < config.bounds.lower[ji] ||
          trial[ji] > config.bounds.upper[ji]) {
        trial[ji] =
            rng.uniform(config.bounds.lower[ji], config.bounds.upper[ji]);
      }
    }
    trials.push_back(std::move(trial));
  }

  Population next = population;
  for (int i = 0; i < np; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    // A NaN energy fails this comparison and the trial is dropped, so a cost
    // that misbehaves off the initial population cannot poison the search.
    const double e = cost(trials[ii]);
    if (e <= population.energies[ii]) {
      next.members[ii] = std::move(trials[ii]);
      next.energies[ii] = e;
    }
  }
  return next;
}

OptimResult de_minimize(const CostFn& cost, const DeConfig& config,
                        const std::optional<Population>& initial_population) {
  config.validate();
  const int np = config.population_size;
  const int dim = config.bounds.dimension();
  Rng rng(config.rng_seed);

  Population pop;
  if (initial_population.has_value()) {
    if (initial_population->size() != np) {
      throw std::invalid_argument(
          "initial population size does not match population_size (" +
          std::to_string(initial_population->size()) + " vs " +
          std::to_string(np) + ")");
    }
    if (initial_population->dimension() != dim) {
      throw std::invalid_argument(
          "initial population dimension does not match the bounds");
    }
    for (const auto& m : initial_population->members) {
      if (!config.bounds.contains(m)) {
        throw std::invalid_argument(
            "initial population member lies outside the bounds");
      }
    }
    pop.members = initial_population->members;
  } else {
    pop.members.reserve(static_cast<std::size_t>(np));
    for (int i = 0; i < np; ++i) {
      std::vector<double> m(static_cast<std::size_t>(dim));
      for (int j = 0; j < dim; ++j) {
        const auto ji = static_cast<std::size_t>(j);
        m[ji] = rng.uniform(config.bounds.lower[ji], config.bounds.upper[ji]);
      }
      pop.members.push_back(std::move(m));
    }
  }

  pop.energies.reserve(static_cast<std::size_t>(np));
  for (const auto& m : pop.members) {
    const double e = cost(m);
    if (!std::isfinite(e)) {
      throw std::domain_error("non-finite cost at an initial population member");
    }
    pop.energies.push_back(e);
  }

  OptimResult result;
  result.function_evaluations = np;
  bool converged = spread_converged(pop.energies, config.tolerance);
  int generations = 0;
  while (!converged && generations < config.max_iterations) {
    pop = de_generation_step(pop, cost, config, rng);
    result.function_evaluations += np;
    ++generations;
    converged = spread_converged(pop.energies, config.tolerance);
  }

  const auto best = static_cast<std::size_t>(pop.best_index());
  result.best_vector = pop.members[best];
  result.best_cost = pop.energies[best];
  result.iterations_used = generations;
  result.converged = converged;
  result.termination =
      converged ? Termination::Converged : Termination::MaxIters;
  return result;
}

}  // namespace irfit
