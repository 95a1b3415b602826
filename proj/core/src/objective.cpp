#include "irfit/objective.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace irfit {

namespace {

void check_usable(const ObservationSet& obs, const WorkloadSeries& loads) {
  if (obs.empty()) {
    throw std::domain_error("observation set is empty");
  }
  if (obs.max_day() > loads.days()) {
    throw std::domain_error("observation on day " +
                            std::to_string(obs.max_day()) +
                            " is past the workload horizon of " +
                            std::to_string(loads.days()) + " days");
  }
}

}  // namespace

ObservationSet ObservationSet::from_entries(std::vector<Observation> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const Observation& a, const Observation& b) {
              return a.day < b.day;
            });
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].day < 1) {
      throw std::domain_error("observation days must be positive");
    }
    if (!std::isfinite(entries[i].value)) {
      throw std::domain_error("observation values must be finite");
    }
    if (i > 0 && entries[i].day == entries[i - 1].day) {
      throw std::domain_error("duplicate observation on day " +
                              std::to_string(entries[i].day));
    }
  }
  ObservationSet set;
  set.entries_ = std::move(entries);
  return set;
}

bool ObservationSet::contains_day(int day) const {
  return std::binary_search(entries_.begin(), entries_.end(),
                            Observation{day, 0.0},
                            [](const Observation& a, const Observation& b) {
                              return a.day < b.day;
                            });
}

std::vector<double> ObservationSet::values() const {
  std::vector<double> out;
  out.reserve(entries_.size());
  for (const Observation& e : entries_) out.push_back(e.value);
  return out;
}

std::vector<int> ObservationSet::days() const {
  std::vector<int> out;
  out.reserve(entries_.size());
  for (const Observation& e : entries_) out.push_back(e.day);
  return out;
}

void require_disjoint(const ObservationSet& fit,
                      const ObservationSet& holdout) {
  for (const Observation& h : holdout.entries()) {
    if (fit.contains_day(h.day)) {
      throw std::domain_error("day " + std::to_string(h.day) +
                              " appears in both fit and holdout sets");
    }
  }
}

double sse(const ModelParams& params, const WorkloadSeries& loads,
           const ObservationSet& obs) {
  params.validate();
  check_usable(obs, loads);
  const double decay1 = std::exp(-1.0 / params.r1);
  const double decay2 = std::exp(-1.0 / params.r2);
  double s1 = 0.0, s2 = 0.0;
  double total = 0.0;
  auto it = obs.entries().begin();
  for (int t = 1;; ++t) {
    if (t == it->day) {
      const double pred = params.p0 + params.k1 * s1 - params.k2 * s2;
      const double r = pred - it->value;
      total += r * r;
      if (++it == obs.entries().end()) break;
    }
    const double w = loads.load_on(t);
    s1 = decay1 * (s1 + w);
    s2 = decay2 * (s2 + w);
  }
  return total;
}

std::array<double, ModelParams::kCount> sse_gradient(
    const ModelParams& params, const WorkloadSeries& loads,
    const ObservationSet& obs) {
  params.validate();
  check_usable(obs, loads);
  const double decay1 = std::exp(-1.0 / params.r1);
  const double decay2 = std::exp(-1.0 / params.r2);
  const double inv_r1sq = 1.0 / (params.r1 * params.r1);
  const double inv_r2sq = 1.0 / (params.r2 * params.r2);
  double s1 = 0.0, s2 = 0.0, u1 = 0.0, u2 = 0.0;
  std::array<double, ModelParams::kCount> grad{};
  auto it = obs.entries().begin();
  for (int t = 1;; ++t) {
    if (t == it->day) {
      const double pred = params.p0 + params.k1 * s1 - params.k2 * s2;
      const double r2x = 2.0 * (pred - it->value);
      grad[0] += r2x;
      grad[1] += r2x * s1;
      grad[2] -= r2x * s2;
      grad[3] += r2x * params.k1 * u1 * inv_r1sq;
      grad[4] -= r2x * params.k2 * u2 * inv_r2sq;
      if (++it == obs.entries().end()) break;
    }
    const double w = loads.load_on(t);
    u1 = decay1 * (u1 + s1 + w);
    s1 = decay1 * (s1 + w);
    u2 = decay2 * (u2 + s2 + w);
    s2 = decay2 * (s2 + w);
  }
  return grad;
}

double holdout_loss(const ModelParams& params, const WorkloadSeries& loads,
                    const ObservationSet& holdout) {
  return sse(params, loads, holdout);
}

}  // namespace irfit
