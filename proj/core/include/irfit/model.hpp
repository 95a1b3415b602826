#pragma once

#include <array>
#include <vector>

namespace irfit {

// Parameters of the two-component impulse-response performance model.
//
// Predicted performance on day t is the baseline plus a fitness term minus a
// fatigue term, each an exponentially weighted sum of all strictly earlier
// training loads:
//
//   p(t) = p0 + k1 * sum_{i<t} w_i e^{-(t-i)/r1}
//             - k2 * sum_{i<t} w_i e^{-(t-i)/r2}
//
// The fatigue term enters with a minus sign and both exponentials carry the
// full lag t-i. Day 1 has no history, so p(1) = p0.
struct ModelParams {
  double p0 = 0.0;  // baseline performance
  double k1 = 0.0;  // fitness magnitude
  double k2 = 0.0;  // fatigue magnitude
  double r1 = 1.0;  // fitness decay time constant, days
  double r2 = 1.0;  // fatigue decay time constant, days

  static constexpr int kCount = 5;

  std::array<double, kCount> to_array() const { return {p0, k1, k2, r1, r2}; }
  std::vector<double> to_vector() const { return {p0, k1, k2, r1, r2}; }

  static ModelParams from_array(const std::array<double, kCount>& a) {
    return {a[0], a[1], a[2], a[3], a[4]};
  }

  // Throws std::invalid_argument unless v has exactly kCount entries.
  static ModelParams from_vector(const std::vector<double>& v);

  // Throws std::domain_error unless every value is finite, k1 and k2 are
  // nonnegative, and r1 and r2 are positive.
  void validate() const;
};

// Names of the parameters in storage order, for reports and CSV headers.
inline constexpr std::array<const char*, ModelParams::kCount> kParamNames = {
    "p0", "k1", "k2", "r1", "r2"};

// Daily training loads, day-indexed from 1.
class WorkloadSeries {
 public:
  // Throws std::domain_error if loads is empty or any load is negative or
  // non-finite.
  explicit WorkloadSeries(std::vector<double> loads);

  int days() const { return static_cast<int>(loads_.size()); }
  double load_on(int day) const {
    return loads_[static_cast<std::size_t>(day) - 1];
  }
  const std::vector<double>& loads() const { return loads_; }

 private:
  std::vector<double> loads_;
};

// Predicted performance on `day`. Valid days are 1..days()+1; the day after
// the series end is allowed so a fitted model can be queried one step ahead.
// Throws std::domain_error for days outside that range.
double predict_day(const ModelParams& params, const WorkloadSeries& loads,
                   int day);

// Predictions for every day 1..days(). Computed with an O(T) exponential
// decay recursion rather than the O(T^2) double sum.
std::vector<double> predict_series(const ModelParams& params,
                                   const WorkloadSeries& loads);

// Partial derivatives of predict_day with respect to (p0, k1, k2, r1, r2),
// evaluated analytically in O(T).
std::array<double, ModelParams::kCount> gradient_day(
    const ModelParams& params, const WorkloadSeries& loads, int day);

}  // namespace irfit
