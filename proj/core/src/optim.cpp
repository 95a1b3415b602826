#include "irfit/optim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace irfit {

Bounds::Bounds(std::vector<double> lo, std::vector<double> hi)
    : lower(std::move(lo)), upper(std::move(hi)) {
  validate();
}

void Bounds::validate() const {
  if (lower.empty() || lower.size() != upper.size()) {
    throw std::invalid_argument(
        "bounds must be non-empty with matching lower/upper lengths");
  }
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (!std::isfinite(lower[i]) || !std::isfinite(upper[i])) {
      throw std::invalid_argument("bounds must be finite");
    }
    if (lower[i] >= upper[i]) {
      throw std::invalid_argument(
          "each lower bound must be strictly below its upper bound");
    }
  }
}

bool Bounds::contains(const std::vector<double>& x) const {
  if (x.size() != lower.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < lower[i] || x[i] > upper[i]) return false;
  }
  return true;
}

void Bounds::clamp(std::vector<double>& x) const {
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = std::clamp(x[i], lower[i], upper[i]);
  }
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::Converged:
      return "converged";
    case Termination::MaxEvals:
      return "max_evals";
    case Termination::MaxIters:
      return "max_iters";
    case Termination::LineSearchFailure:
      return "line_search_failure";
  }
  return "unknown";
}

}  // namespace irfit
