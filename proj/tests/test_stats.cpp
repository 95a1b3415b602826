#include <doctest.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "irfit/rng.hpp"
#include "irfit/stats.hpp"

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

TEST_CASE("r_squared on known residuals") {
  const std::vector<double> observed = {1.0, 2.0, 3.0, 4.0};
  const std::vector<double> predicted = {1.1, 1.9, 3.2, 3.8};
  // SS_res = 0.1, SS_tot = 5.
  CHECK(irfit::r_squared(predicted, observed) ==
        doctest::Approx(0.98).epsilon(1e-14));
  CHECK(irfit::r_squared(observed, observed) == 1.0);
}

TEST_CASE("r_squared input validation") {
  const std::vector<double> a = {1.0, 2.0, 3.0};
  const std::vector<double> b = {1.0, 2.0};
  CHECK_THROWS_AS((void)irfit::r_squared(a, b), std::invalid_argument);
  const std::vector<double> one = {1.0};
  CHECK_THROWS_AS((void)irfit::r_squared(one, one), std::invalid_argument);
  const std::vector<double> flat = {2.0, 2.0, 2.0};
  CHECK_THROWS_AS((void)irfit::r_squared(a, flat), std::domain_error);
}

TEST_CASE("interpolated percentiles on 1..100") {
  std::vector<double> v(100);
  std::iota(v.begin(), v.end(), 1.0);
  CHECK(irfit::percentile_sorted(v, 0.0) == 1.0);
  CHECK(irfit::percentile_sorted(v, 1.0) == 100.0);
  CHECK(irfit::percentile_sorted(v, 0.5) == doctest::Approx(50.5).epsilon(1e-14));
  CHECK(irfit::percentile_sorted(v, 0.025) ==
        doctest::Approx(3.475).epsilon(1e-14));
  CHECK(irfit::percentile_sorted(v, 0.975) ==
        doctest::Approx(97.525).epsilon(1e-14));

  const std::vector<double> single = {7.0};
  CHECK(irfit::percentile_sorted(single, 0.4) == 7.0);

  CHECK_THROWS_AS((void)irfit::percentile_sorted(std::vector<double>{}, 0.5),
                  std::domain_error);
  CHECK_THROWS_AS((void)irfit::percentile_sorted(v, -0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)irfit::percentile_sorted(v, 1.1),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)irfit::percentile_sorted(v, std::nan("")),
                  std::invalid_argument);
}

TEST_CASE("summarize on a hand-checked sample") {
  const std::vector<double> v = {2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0};
  const irfit::GroupSummary s = irfit::summarize(v);
  CHECK(s.n == 8);
  CHECK(s.mean == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(s.std_dev == doctest::Approx(std::sqrt(32.0 / 7.0)).epsilon(1e-14));
  const double half = 1.96 * 2.0 / std::sqrt(7.0);
  CHECK(s.ci_mean.first == doctest::Approx(5.0 - half).epsilon(1e-12));
  CHECK(s.ci_mean.second == doctest::Approx(5.0 + half).epsilon(1e-12));
  // h = 0.175 and h = 6.825 on the sorted sample.
  CHECK(s.percentile_interval.first == doctest::Approx(2.35).epsilon(1e-12));
  CHECK(s.percentile_interval.second == doctest::Approx(8.65).epsilon(1e-12));

  CHECK_THROWS_AS(irfit::summarize(std::vector<double>{1.0}),
                  std::domain_error);
}

TEST_CASE("summarize accepts unsorted input") {
  const std::vector<double> v = {9.0, 2.0, 5.0, 4.0, 7.0, 4.0, 5.0, 4.0};
  const irfit::GroupSummary s = irfit::summarize(v);
  CHECK(s.mean == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(s.percentile_interval.first == doctest::Approx(2.35).epsilon(1e-12));
}

TEST_CASE("regularized incomplete beta closed forms") {
  for (double x : {0.01, 0.2, 0.5, 0.73, 0.99}) {
    CHECK(irfit::regularized_incomplete_beta(1.0, 1.0, x) ==
          doctest::Approx(x).epsilon(1e-13));
    for (double b : {0.5, 1.0, 3.0, 12.5}) {
      CHECK(irfit::regularized_incomplete_beta(1.0, b, x) ==
            doctest::Approx(1.0 - std::pow(1.0 - x, b)).epsilon(1e-12));
      CHECK(irfit::regularized_incomplete_beta(b, 1.0, x) ==
            doctest::Approx(std::pow(x, b)).epsilon(1e-12));
    }
  }
  for (double a : {0.5, 1.0, 2.0, 10.0, 40.0}) {
    CHECK(irfit::regularized_incomplete_beta(a, a, 0.5) ==
          doctest::Approx(0.5).epsilon(1e-12));
  }
  CHECK(irfit::regularized_incomplete_beta(2.0, 3.0, 0.0) == 0.0);
  CHECK(irfit::regularized_incomplete_beta(2.0, 3.0, 1.0) == 1.0);
  CHECK(irfit::regularized_incomplete_beta(2.0, 3.0, -0.5) == 0.0);
  CHECK(irfit::regularized_incomplete_beta(2.0, 3.0, 1.5) == 1.0);
  CHECK_THROWS_AS((void)irfit::regularized_incomplete_beta(0.0, 1.0, 0.5),
                  std::domain_error);
  CHECK_THROWS_AS((void)irfit::regularized_incomplete_beta(1.0, -2.0, 0.5),
                  std::domain_error);
}

TEST_CASE("incomplete beta reflection identity") {
  irfit::Rng rng(611);
  for (int i = 0; i < 200; ++i) {
    const double a = rng.uniform(0.25, 30.0);
    const double b = rng.uniform(0.25, 30.0);
    const double x = rng.uniform(0.001, 0.999);
    const double lhs = irfit::regularized_incomplete_beta(a, b, x);
    const double rhs = 1.0 - irfit::regularized_incomplete_beta(b, a, 1.0 - x);
    CHECK(std::fabs(lhs - rhs) < 1e-12);
    CHECK(lhs >= 0.0);
    CHECK(lhs <= 1.0);
  }
}

TEST_CASE("f survival against the two-numerator-df closed form") {
  for (int df2 : {1, 2, 5, 10, 30, 100}) {
    for (double f : {0.1, 0.5, 1.0, 2.5, 7.0, 20.0}) {
      const double expected =
          std::pow(1.0 + 2.0 * f / df2, -0.5 * static_cast<double>(df2));
      CHECK(irfit::f_survival(f, 2, df2) ==
            doctest::Approx(expected).epsilon(1e-10));
    }
  }
}

TEST_CASE("f survival against the Cauchy closed form") {
  for (double f : {0.05, 0.3, 1.0, 4.0, 16.0, 81.0}) {
    const double expected = 1.0 - (2.0 / kPi) * std::atan(std::sqrt(f));
    CHECK(irfit::f_survival(f, 1, 1) ==
          doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("f survival boundary behaviour") {
  CHECK(irfit::f_survival(0.0, 3, 9) == 1.0);
  CHECK(irfit::f_survival(-2.0, 3, 9) == 1.0);
  CHECK(irfit::f_survival(std::numeric_limits<double>::infinity(), 3, 9) ==
        0.0);
  double prev = 1.0;
  for (double f = 0.25; f <= 64.0; f *= 2.0) {
    const double p = irfit::f_survival(f, 4, 17);
    CHECK(p < prev);
    prev = p;
  }
  CHECK_THROWS_AS((void)irfit::f_survival(1.0, 0, 5), std::domain_error);
  CHECK_THROWS_AS((void)irfit::f_survival(1.0, 5, 0), std::domain_error);
  CHECK_THROWS_AS((void)irfit::f_survival(std::nan(""), 2, 5),
                  std::domain_error);
}

TEST_CASE("anova on a hand-checked design") {
  const std::vector<std::vector<double>> groups = {
      {1.0, 2.0, 3.0}, {2.0, 3.0, 4.0}, {3.0, 4.0, 5.0}};
  const irfit::AnovaResult r = irfit::one_way_anova(groups);
  CHECK(r.df_between == 2);
  CHECK(r.df_within == 6);
  // MS_between = 3, MS_within = 1.
  CHECK(r.f_statistic == doctest::Approx(3.0).epsilon(1e-14));
  // With two numerator df: p = (1 + 2F/6)^{-3} = 1/8.
  CHECK(r.p_value == doctest::Approx(0.125).epsilon(1e-12));
}

TEST_CASE("anova degenerate cases") {
  const std::vector<std::vector<double>> flat = {{5.0, 5.0}, {5.0, 5.0, 5.0}};
  const irfit::AnovaResult all_equal = irfit::one_way_anova(flat);
  CHECK(all_equal.f_statistic == 0.0);
  CHECK(all_equal.p_value == 1.0);

  const std::vector<std::vector<double>> separated = {{1.0, 1.0}, {2.0, 2.0}};
  const irfit::AnovaResult split = irfit::one_way_anova(separated);
  CHECK(std::isinf(split.f_statistic));
  CHECK(split.f_statistic > 0.0);
  CHECK(split.p_value == 0.0);

  CHECK_THROWS_AS(irfit::one_way_anova({{1.0, 2.0}}), std::domain_error);
  CHECK_THROWS_AS(irfit::one_way_anova({{1.0, 2.0}, {3.0}}),
                  std::domain_error);
}

TEST_CASE("anova is insensitive to a common shift") {
  irfit::Rng rng(29);
  std::vector<std::vector<double>> groups(3);
  for (auto& g : groups) {
    for (int i = 0; i < 20; ++i) g.push_back(rng.normal(10.0, 2.0));
  }
  const irfit::AnovaResult base = irfit::one_way_anova(groups);
  for (auto& g : groups) {
    for (double& v : g) v += 1234.5;
  }
  const irfit::AnovaResult shifted = irfit::one_way_anova(groups);
  CHECK(shifted.f_statistic ==
        doctest::Approx(base.f_statistic).epsilon(1e-9));
  CHECK(shifted.p_value == doctest::Approx(base.p_value).epsilon(1e-8));
}
