#pragma once

#include <deque>
#include <vector>

#include "irfit/optim.hpp"

namespace irfit {

struct LineSearchConfig {
  double sufficient_decrease = 1e-4;  // Armijo constant c1
  double curvature = 0.9;             // strong-Wolfe constant c2
  int max_trials = 20;
};

struct LbfgsConfig {
  int max_function_evaluations = 15000;
  int max_iterations = 15000;
  int history_size = 10;  // stored correction pairs (m)
  double tolerance = 1e-11;
  Bounds bounds;
  LineSearchConfig line_search;

  // Throws std::invalid_argument unless history_size >= 1,
  // 0 < c1 < c2 < 1, both budgets are positive, and bounds are valid.
  void validate() const;
};

// Recent (s, y) correction pairs for the limited-memory inverse-Hessian
// approximation. Pairs violating the curvature condition
// s'y > 1e-12 * |s||y| are rejected at insertion, so every stored pair has
// s'y > 0 and the implied approximation stays positive definite.
class LbfgsHistory {
 public:
  explicit LbfgsHistory(int capacity);

  struct Pair {
    std::vector<double> s;
    std::vector<double> y;
    double rho = 0.0;  // 1 / s'y
  };

  // Returns false (and stores nothing) when the pair fails the curvature
  // test; otherwise appends it, evicting the oldest pair at capacity.
  bool push(std::vector<double> s, std::vector<double> y);
  void clear() { pairs_.clear(); }

  int size() const { return static_cast<int>(pairs_.size()); }
  bool empty() const { return pairs_.empty(); }
  const std::deque<Pair>& pairs() const { return pairs_; }  // oldest first

  // Initial inverse-Hessian scale s'y / y'y from the newest pair; 1 when
  // empty.
  double gamma() const;

 private:
  std::size_t capacity_;
  std::deque<Pair> pairs_;
};

// Two-loop recursion mapping the gradient to a search direction through the
// stored history. With empty history this is steepest descent scaled by
// gamma. The result is a descent direction whenever the gradient is nonzero.
std::vector<double> two_loop_direction(const std::vector<double>& gradient,
                                       const LbfgsHistory& history);

// Box-constrained limited-memory BFGS. Trial points are projected onto the
// bounds, convergence is declared when the projected-gradient infinity norm
// drops to tolerance * max(1, |cost|) or the relative cost decrease between
// accepted iterates falls to the tolerance. x0 is projected into the box
// first. Throws std::domain_error when cost or grad is non-finite at the
// start; a NaN appearing mid-run ends the run with line_search_failure and
// the best point found.
OptimResult lbfgs_minimize(const CostFn& cost, const GradFn& grad,
                           const std::vector<double>& x0,
                           const LbfgsConfig& config);

}  // namespace irfit
