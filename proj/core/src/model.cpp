#include "irfit/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace irfit {

namespace {

void check_day(int day, int last_valid) {
  if (day < 1 || day > last_valid) {
    throw std::domain_error("day " + std::to_string(day) +
                            " outside valid range 1.." +
                            std::to_string(last_valid));
  }
}

}  // namespace

ModelParams ModelParams::from_vector(const std::vector<double>& v) {
  if (v.size() != static_cast<std::size_t>(kCount)) {
    throw std::invalid_argument("parameter vector must have " +
                                std::to_string(kCount) + " entries, got " +
                                std::to_string(v.size()));
  }
  return {v[0], v[1], v[2], v[3], v[4]};
}

void ModelParams::validate() const {
  for (double v : to_array()) {
    if (!std::isfinite(v)) {
      throw std::domain_error("model parameters must be finite");
    }
  }
  if (k1 < 0.0 || k2 < 0.0) {
    throw std::domain_error("k1 and k2 must be nonnegative");
  }
  if (r1 <= 0.0 || r2 <= 0.0) {
    throw std::domain_error("r1 and r2 must be positive");
  }
}

WorkloadSeries::WorkloadSeries(std::vector<double> loads)
    : loads_(std::move(loads)) {
  if (loads_.empty()) {
    throw std::domain_error("workload series must cover at least one day");
  }
  for (double w : loads_) {
    if (!std::isfinite(w) || w < 0.0) {
      throw std::domain_error("workloads must be finite and nonnegative");
    }
  }
}

double predict_day(const ModelParams& params, const WorkloadSeries& loads,
                   int day) {
  params.validate();
  check_day(day, loads.days() + 1);
  const double decay1 = std::exp(-1.0 / params.r1);
  const double decay2 = std::exp(-1.0 / params.r2);
  double fitness = 0.0;
  double fatigue = 0.0;
  for (int t = 1; t < day; ++t) {
    const double w = loads.load_on(t);
    fitness = decay1 * (fitness + w);
    fatigue = decay2 * (fatigue + w);
  }
  return params.p0 + params.k1 * fitness - params.k2 * fatigue;
}

std::vector<double> predict_series(const ModelParams& params,
                                   const WorkloadSeries& loads) {
  params.validate();
  const double decay1 = std::exp(-1.0 / params.r1);
  const double decay2 = std::exp(-1.0 / params.r2);
  std::vector<double> out(static_cast<std::size_t>(loads.days()));
  double fitness = 0.0;
  double fatigue = 0.0;
  for (int t = 1; t <= loads.days(); ++t) {
    out[static_cast<std::size_t>(t) - 1] =
        params.p0 + params.k1 * fitness - params.k2 * fatigue;
    const double w = loads.load_on(t);
    fitness = decay1 * (fitness + w);
    fatigue = decay2 * (fatigue + w);
  }
  return out;
}

std::array<double, ModelParams::kCount> gradient_day(
    const ModelParams& params, const WorkloadSeries& loads, int day) {
  params.validate();
  check_day(day, loads.days() + 1);
  const double decay1 = std::exp(-1.0 / params.r1);
  const double decay2 = std::exp(-1.0 / params.r2);
  // s holds sum w_i e^{-(t-i)/r}; u holds sum w_i (t-i) e^{-(t-i)/r}, the
  // lag-weighted companion needed for the decay-constant derivatives. Both
  // advance by one day per step, with u updated before s so it sees the
  // previous day's s.
  double s1 = 0.0, s2 = 0.0, u1 = 0.0, u2 = 0.0;
  for (int t = 1; t < day; ++t) {
    const double w = loads.load_on(t);
    u1 = decay1 * (u1 + s1 + w);
    s1 = decay1 * (s1 + w);
    u2 = decay2 * (u2 + s2 + w);
    s2 = decay2 * (s2 + w);
  }
  return {1.0, s1, -s2, params.k1 * u1 / (params.r1 * params.r1),
          -params.k2 * u2 / (params.r2 * params.r2)};
}

}  // namespace irfit
