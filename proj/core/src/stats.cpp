#include "irfit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace irfit {

namespace {

double mean_of(std::span<const double> values) {
  double total = 0.0;
  for (double v : values) total += v;
  return total / static_cast<double>(values.size());
}

// Modified Lentz evaluation of the incomplete beta continued fraction.
double beta_continued_fraction(double a, double b, double x) {
  constexpr double eps = 1e-15;
  constexpr double tiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 500; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) return h;
  }
  throw std::runtime_error(
      "incomplete beta continued fraction failed to converge");
}

}  // namespace

double r_squared(std::span<const double> predicted,
                 std::span<const double> observed) {
  if (predicted.size() != observed.size()) {
    throw std::invalid_argument(
        "predicted and observed series must have equal length");
  }
  if (observed.size() < 2) {
    throw std::invalid_argument("r_squared requires at least two points");
  }
  const double obs_mean = mean_of(observed);
  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double r = observed[i] - predicted[i];
    const double d = observed[i] - obs_mean;
    ss_res += r * r;
    ss_tot += d * d;
  }
  if (ss_tot == 0.0) {
    throw std::domain_error("r_squared undefined for constant observations");
  }
  return 1.0 - ss_res / ss_tot;
}

double percentile_sorted(std::span<const double> sorted_values, double p) {
  if (sorted_values.empty()) {
    throw std::domain_error("percentile of an empty sample");
  }
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("percentile rank must lie in [0, 1]");
  }
  const std::size_t n = sorted_values.size();
  const double h = p * static_cast<double>(n - 1);
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= n) return sorted_values[n - 1];
  const double frac = h - static_cast<double>(lo);
  return sorted_values[lo] + frac * (sorted_values[lo + 1] - sorted_values[lo]);
}

GroupSummary summarize(std::span<const double> values) {
  if (values.size() < 2) {
    throw std::domain_error("summarize requires at least two values");
  }
  const auto n = static_cast<double>(values.size());
  const double mean = mean_of(values);
  double ss = 0.0;
  for (double v : values) {
    const double d = v - mean;
    ss += d * d;
  }
  const double sd = std::sqrt(ss / (n - 1.0));
  const double half_width = 1.96 * sd / std::sqrt(n);

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());

  GroupSummary out;
  out.mean = mean;
  out.std_dev = sd;
  out.ci_mean = {mean - half_width, mean + half_width};
  out.percentile_interval = {percentile_sorted(sorted, 0.025),
                             percentile_sorted(sorted, 0.975)};
  out.n = static_cast<int>(values.size());
  return out;
}

AnovaResult one_way_anova(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) {
    throw std::domain_error("anova requires at least two groups");
  }
  std::size_t total_n = 0;
  for (const auto& g : groups) {
    if (g.size() < 2) {
      throw std::domain_error("each anova group needs at least two values");
    }
    total_n += g.size();
  }

  double grand_sum = 0.0;
  std::vector<double> group_means;
  group_means.reserve(groups.size());
  for (const auto& g : groups) {
    const double m = mean_of(g);
    group_means.push_back(m);
    grand_sum += m * static_cast<double>(g.size());
  }
  const double grand_mean = grand_sum / static_cast<double>(total_n);

  double ss_between = 0.0;
  double ss_within = 0.0;
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const double dm = group_means[gi] - grand_mean;
    ss_between += static_cast<double>(groups[gi].size()) * dm * dm;
    for (double v : groups[gi]) {
      const double d = v - group_means[gi];
      ss_within += d * d;
    }
  }

  AnovaResult out;
  out.df_between = static_cast<int>(groups.size()) - 1;
  out.df_within = static_cast<int>(total_n - groups.size());
  const double ms_between = ss_between / out.df_between;
  const double ms_within = ss_within / out.df_within;
  if (ms_within == 0.0) {
    if (ms_between == 0.0) {
      out.f_statistic = 0.0;
      out.p_value = 1.0;
    } else {
      out.f_statistic = std::numeric_limits<double>::infinity();
      out.p_value = 0.0;
    }
    return out;
  }
  out.f_statistic = ms_between / ms_within;
  out.p_value = f_survival(out.f_statistic, out.df_between, out.df_within);
  return out;
}

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::domain_error("incomplete beta requires a > 0 and b > 0");
  }
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) -
                           std::lgamma(b) + a * std::log(x) +
                           b * std::log1p(-x);
  const double front = std::exp(log_front);
  // The continued fraction converges fast only below the distribution mode;
  // above it, evaluate the mirrored tail instead.
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double f_survival(double f, int df1, int df2) {
  if (df1 < 1 || df2 < 1) {
    throw std::domain_error("F distribution needs positive degrees of freedom");
  }
  if (std::isnan(f)) {
    throw std::domain_error("F statistic must not be NaN");
  }
  if (f <= 0.0) return 1.0;
  if (std::isinf(f)) return 0.0;
  const double d1 = df1;
  const double d2 = df2;
  const double x = d2 / (d2 + d1 * f);
  return regularized_incomplete_beta(d2 / 2.0, d1 / 2.0, x);
}

}  // namespace irfit
