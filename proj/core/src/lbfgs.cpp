#include "irfit/lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace irfit {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) total += a[i] * b[i];
  return total;
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

bool all_finite(const std::vector<double>& a) {
  for (double v : a) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

double projected_gradient_inf_norm(const std::vector<double>& x,
                                   const std::vector<double>& g,
                                   const Bounds& bounds) {
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double stepped =
        std::clamp(x[i] - g[i], bounds.lower[i], bounds.upper[i]);
    worst = std::max(worst, std::fabs(x[i] - stepped));
  }
  return worst;
}

struct LineSearchResult {
  bool success = false;
  std::vector<double> x;
  std::vector<double> g;
  double f = 0.0;
};

// Backtracking from a unit step, projecting every trial onto the box. A trial
// is accepted outright when it satisfies both the Armijo decrease and the
// strong-Wolfe curvature condition along the projected displacement; if no
// trial manages both, the largest Armijo-satisfying step is used instead.
LineSearchResult line_search(const CostFn& cost, const GradFn& grad,
                             const std::vector<double>& x0, double f0,
                             const std::vector<double>& g0,
                             const std::vector<double>& direction,
                             double initial_alpha, const LbfgsConfig& config,
                             int& fevals) {
  const double c1 = config.line_search.sufficient_decrease;
  const double c2 = config.line_search.curvature;
  LineSearchResult fallback;
  double alpha = initial_alpha;
  for (int trial = 0; trial < config.line_search.max_trials; ++trial) {
    if (fevals >= config.max_function_evaluations) break;
    std::vector<double> xt(x0.size());
    for (std::size_t i = 0; i < x0.size(); ++i) {
      xt[i] = x0[i] + alpha * direction[i];
    }
    config.bounds.clamp(xt);

    std::vector<double> delta(x0.size());
    bool moved = false;
    for (std::size_t i = 0; i < x0.size(); ++i) {
      delta[i] = xt[i] - x0[i];
      moved = moved || delta[i] != 0.0;
    }
    const double dg = dot(g0, delta);
    if (!moved || dg >= 0.0) {
      alpha *= 0.5;
      continue;
    }

    ++fevals;
    const double ft = cost(xt);
    if (std::isfinite(ft) && ft <= f0 + c1 * dg) {
      std::vector<double> gt = grad(xt);
      if (all_finite(gt)) {
        const bool curvature_ok = std::fabs(dot(gt, delta)) <= c2 * std::fabs(dg);
        if (curvature_ok) {
          return {true, std::move(xt), std::move(gt), ft};
        }
        if (!fallback.success) {
          fallback = {true, std::move(xt), std::move(gt), ft};
        }
      }
    }
    alpha *= 0.5;
  }
  return fallback;
}

}  // namespace

void LbfgsConfig::validate() const {
  if (max_function_evaluations < 1 || max_iterations < 1) {
    throw std::invalid_argument("iteration and evaluation budgets must be positive");
  }
  if (history_size < 1) {
    throw std::invalid_argument("history_size must be at least 1");
  }
  if (!(tolerance >= 0.0)) {
    throw std::invalid_argument("tolerance must be nonnegative");
  }
  const double c1 = line_search.sufficient_decrease;
  const double c2 = line_search.curvature;
  if (!(0.0 < c1 && c1 < c2 && c2 < 1.0)) {
    throw std::invalid_argument(
        "line search constants must satisfy 0 < c1 < c2 < 1");
  }
  if (line_search.max_trials < 1) {
    throw std::invalid_argument("line search needs at least one trial");
  }
  bounds.validate();
}

LbfgsHistory::LbfgsHistory(int capacity)
    : capacity_(static_cast<std::size_t>(capacity)) {
  if (capacity < 1) {
    throw std::invalid_argument("history capacity must be at least 1");
  }
}

bool LbfgsHistory::push(std::vector<double> s, std::vector<double> y) {
  const double sy = dot(s, y);
  if (sy <= 1e-12 * norm(s) * norm(y)) return false;
  pairs_.push_back({std::move(s), std::move(y), 1.0 / sy});
  if (pairs_.size() > capacity_) pairs_.pop_front();
  return true;
}

double LbfgsHistory::gamma() const {
  if (pairs_.empty()) return 1.0;
  const Pair& newest = pairs_.back();
  return 1.0 / (newest.rho * dot(newest.y, newest.y));
}

std::vector<double> two_loop_direction(const std::vector<double>& gradient,
                                       const LbfgsHistory& history) {
  std::vector<double> q = gradient;
  const auto& pairs = history.pairs();
  std::vector<double> alpha(pairs.size());
  for (std::size_t k = pairs.size(); k-- > 0;) {
    alpha[k] = pairs[k].rho * dot(pairs[k].s, q);
    for (std::size_t i = 0; i < q.size(); ++i) {
      q[i] -= alpha[k] * pairs[k].y[i];
    }
  }
  const double gamma = history.gamma();
  for (double& v : q) v *= gamma;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const double beta = pairs[k].rho * dot(pairs[k].y, q);
    for (std::size_t i = 0; i < q.size(); ++i) {
      q[i] += (alpha[k] - beta) * pairs[k].s[i];
    }
  }
  for (double& v : q) v = -v;
  return q;
}

OptimResult lbfgs_minimize(const CostFn& cost, const GradFn& grad,
                           const std::vector<double>& x0,
                           const LbfgsConfig& config) {
  config.validate();
  if (static_cast<int>(x0.size()) != config.bounds.dimension()) {
    throw std::invalid_argument("x0 dimension does not match the bounds");
  }

  std::vector<double> x = x0;
  config.bounds.clamp(x);
  int fevals = 1;
  double f = cost(x);
  std::vector<double> g = grad(x);
  if (!std::isfinite(f) || !all_finite(g)) {
    throw std::domain_error("cost or gradient is non-finite at the start point");
  }

  LbfgsHistory history(config.history_size);
  bool converged = false;
  Termination termination = Termination::MaxIters;
  int iterations = 0;

  for (;;) {
    if (projected_gradient_inf_norm(x, g, config.bounds) <=
        config.tolerance * std::max(1.0, std::fabs(f))) {
      converged = true;
      termination = Termination::Converged;
      break;
    }
    if (iterations >= config.max_iterations) {
      termination = Termination::MaxIters;
      break;
    }
    if (fevals >= config.max_function_evaluations) {
      termination = Termination::MaxEvals;
      break;
    }

    std::vector<double> direction = two_loop_direction(g, history);
    bool steepest = history.empty();
    if (dot(direction, g) >= 0.0) {
      // The quasi-Newton model failed to produce descent; drop it.
      history.clear();
      steepest = true;
      for (std::size_t i = 0; i < g.size(); ++i) direction[i] = -g[i];
    }

    // Without curvature information a raw gradient step carries the
    // objective's scaling; start from a unit-length step instead.
    const double alpha0 =
        steepest ? std::min(1.0, 1.0 / norm(direction)) : 1.0;
    LineSearchResult step =
        line_search(cost, grad, x, f, g, direction, alpha0, config, fevals);
    if (!step.success && !steepest) {
      history.clear();
      for (std::size_t i = 0; i < g.size(); ++i) direction[i] = -g[i];
      const double retry_alpha0 = std::min(1.0, 1.0 / norm(direction));
      step = line_search(cost, grad, x, f, g, direction, retry_alpha0, config,
                         fevals);
    }
    if (!step.success) {
      termination = fevals >= config.max_function_evaluations
                        ? Termination::MaxEvals
                        : Termination::LineSearchFailure;
      break;
    }

    std::vector<double> s(x.size());
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      s[i] = step.x[i] - x[i];
      y[i] = step.g[i] - g[i];
    }
    history.push(std::move(s), std::move(y));

    const double decrease = f - step.f;
    const double scale = std::max({1.0, std::fabs(f), std::fabs(step.f)});
    x = std::move(step.x);
    g = std::move(step.g);
    f = step.f;
    ++iterations;

    if (decrease / scale <= config.tolerance) {
      converged = true;
      termination = Termination::Converged;
      break;
    }
  }

  OptimResult result;
  result.best_vector = std::move(x);
  result.best_cost = f;
  result.iterations_used = iterations;
  result.function_evaluations = fevals;
  result.converged = converged;
  result.termination = termination;
  return result;
}

}  // namespace irfit
