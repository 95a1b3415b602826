#pragma once

#include <span>
#include <utility>
#include <vector>

namespace irfit {

// Descriptive statistics of one sample.
struct GroupSummary {
  double mean = 0.0;
  double std_dev = 0.0;  // sample standard deviation, n-1 denominator
  std::pair<double, double> ci_mean;  // normal-approximation 95% CI of the mean
  std::pair<double, double> percentile_interval;  // empirical 2.5th..97.5th
  int n = 0;
};

struct AnovaResult {
  double f_statistic = 0.0;
  int df_between = 0;
  int df_within = 0;
  double p_value = 1.0;
};

// Coefficient of determination, 1 - SS_res/SS_tot. Requires two series of
// equal length >= 2 (std::invalid_argument otherwise); throws
// std::domain_error when the observed series is constant (SS_tot == 0).
double r_squared(std::span<const double> predicted,
                 std::span<const double> observed);

// Mean, sample standard deviation, the +-1.96 sd/sqrt(n) interval for the
// mean, and the empirical 2.5th/97.5th percentiles. Requires n >= 2
// (std::domain_error otherwise).
GroupSummary summarize(std::span<const double> values);

// Linear-interpolation percentile of an ascending-sorted sample, with
// p in [0, 1] mapped onto rank h = p * (n - 1).
double percentile_sorted(std::span<const double> sorted_values, double p);

// One-way fixed-effects analysis of variance. Requires at least two groups,
// each with at least two values (std::domain_error otherwise). When all
// variation vanishes the result is F = 0, p = 1; when only the within-group
// variation vanishes, F = +infinity, p = 0.
AnovaResult one_way_anova(const std::vector<std::vector<double>>& groups);

// Regularized incomplete beta function I_x(a, b) for a, b > 0, evaluated by
// continued fraction to near machine precision.
double regularized_incomplete_beta(double a, double b, double x);

// Upper tail P(F > f) of the F distribution with (df1, df2) degrees of
// freedom.
double f_survival(double f, int df1, int df2);

}  // namespace irfit
