#pragma once

#include <array>
#include <vector>

#include "irfit/model.hpp"

namespace irfit {

// One measured performance value on a given day.
struct Observation {
  int day = 0;
  double value = 0.0;

  friend bool operator==(const Observation&, const Observation&) = default;
};

// Sparse observed performances keyed by day. Entries are kept sorted by day
// and days are unique; values are finite.
class ObservationSet {
 public:
  ObservationSet() = default;

  // Sorts entries by day. Throws std::domain_error on a duplicate day, a day
  // below 1, or a non-finite value.
  static ObservationSet from_entries(std::vector<Observation> entries);

  const std::vector<Observation>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  int size() const { return static_cast<int>(entries_.size()); }
  bool contains_day(int day) const;

  // Largest day present, or 0 for an empty set.
  int max_day() const { return entries_.empty() ? 0 : entries_.back().day; }

  std::vector<double> values() const;
  std::vector<int> days() const;

 private:
  std::vector<Observation> entries_;
};

// Throws std::domain_error if the two sets share a day.
void require_disjoint(const ObservationSet& fit, const ObservationSet& holdout);

// Sum of squared residuals between model predictions and observations.
// Throws std::domain_error if obs is empty or any observed day exceeds the
// workload horizon.
double sse(const ModelParams& params, const WorkloadSeries& loads,
           const ObservationSet& obs);

// Analytic gradient of sse with respect to (p0, k1, k2, r1, r2), accumulated
// in one O(T) sweep alongside the prediction recursion.
std::array<double, ModelParams::kCount> sse_gradient(
    const ModelParams& params, const WorkloadSeries& loads,
    const ObservationSet& obs);

// Sum of squared residuals on a holdout set; same formula as sse, kept as a
// separate entry point because reports treat the two losses differently.
double holdout_loss(const ModelParams& params, const WorkloadSeries& loads,
                    const ObservationSet& holdout);

}  // namespace irfit
