#pragma once

#include <functional>
#include <string_view>
#include <vector>

namespace irfit {

// Per-dimension box constraints with finite bounds and lower < upper.
struct Bounds {
  std::vector<double> lower;
  std::vector<double> upper;

  Bounds() = default;
  Bounds(std::vector<double> lo, std::vector<double> hi);

  int dimension() const { return static_cast<int>(lower.size()); }
  bool contains(const std::vector<double>& x) const;
  void clamp(std::vector<double>& x) const;

  // Throws std::invalid_argument if empty, mismatched, non-finite, or any
  // lower[i] >= upper[i].
  void validate() const;
};

enum class Termination { Converged, MaxEvals, MaxIters, LineSearchFailure };

std::string_view to_string(Termination t);

struct OptimResult {
  std::vector<double> best_vector;
  double best_cost = 0.0;
  int iterations_used = 0;
  int function_evaluations = 0;
  bool converged = false;
  Termination termination = Termination::MaxIters;
};

using CostFn = std::function<double(const std::vector<double>&)>;
using GradFn = std::function<std::vector<double>(const std::vector<double>&)>;

}  // namespace irfit
