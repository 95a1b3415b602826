#include <doctest.h>

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "irfit/lbfgs.hpp"
#include "irfit/rng.hpp"

using irfit::Bounds;
using irfit::LbfgsConfig;
using irfit::LbfgsHistory;
using irfit::Termination;

namespace {

LbfgsConfig wide_config(int dim, double lo = -100.0, double hi = 100.0) {
  LbfgsConfig cfg;
  cfg.bounds = Bounds(std::vector<double>(static_cast<std::size_t>(dim), lo),
                      std::vector<double>(static_cast<std::size_t>(dim), hi));
  return cfg;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) total += a[i] * b[i];
  return total;
}

const irfit::CostFn sphere_cost = [](const std::vector<double>& x) {
  const double d0 = x[0] - 1.0;
  const double d1 = x[1] - 2.0;
  return d0 * d0 + d1 * d1;
};
const irfit::GradFn sphere_grad = [](const std::vector<double>& x) {
  return std::vector<double>{2.0 * (x[0] - 1.0), 2.0 * (x[1] - 2.0)};
};

const irfit::CostFn rosen_cost = [](const std::vector<double>& x) {
  const double a = 1.0 - x[0];
  const double b = x[1] - x[0] * x[0];
  return a * a + 100.0 * b * b;
};
const irfit::GradFn rosen_grad = [](const std::vector<double>& x) {
  const double b = x[1] - x[0] * x[0];
  return std::vector<double>{-2.0 * (1.0 - x[0]) - 400.0 * x[0] * b,
                             200.0 * b};
};

}  // namespace

TEST_CASE("config validation") {
  LbfgsConfig cfg = wide_config(2);
  CHECK_NOTHROW(cfg.validate());
  LbfgsConfig bad = cfg;
  bad.history_size = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.max_iterations = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.max_function_evaluations = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.tolerance = -1e-9;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.line_search.sufficient_decrease = 0.95;  // violates c1 < c2
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.line_search.curvature = 1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.line_search.max_trials = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("history rejects flat or opposing curvature") {
  LbfgsHistory h(3);
  CHECK(h.empty());
  CHECK(h.gamma() == 1.0);
  CHECK_FALSE(h.push({1.0, 0.0}, {-1.0, 0.0}));
  CHECK_FALSE(h.push({1.0, 0.0}, {0.0, 0.0}));
  CHECK_FALSE(h.push({1.0, 0.0}, {0.0, 1.0}));  // orthogonal, s'y = 0
  CHECK(h.empty());
  CHECK(h.push({1.0, 0.0}, {0.5, 0.0}));
  CHECK(h.size() == 1);
  CHECK(h.gamma() == doctest::Approx(2.0).epsilon(1e-14));  // s'y / y'y
}

TEST_CASE("history evicts oldest at capacity") {
  LbfgsHistory h(2);
  CHECK(h.push({1.0}, {1.0}));
  CHECK(h.push({2.0}, {2.0}));
  CHECK(h.push({3.0}, {3.0}));
  REQUIRE(h.size() == 2);
  CHECK(h.pairs()[0].s[0] == 2.0);
  CHECK(h.pairs()[1].s[0] == 3.0);
}

TEST_CASE("two-loop with no history is steepest descent") {
  LbfgsHistory h(5);
  const std::vector<double> g = {3.0, -4.0, 0.25};
  CHECK(irfit::two_loop_direction(g, h) ==
        std::vector<double>{-3.0, 4.0, -0.25});
}

TEST_CASE("two-loop with an identity-like pair is still steepest descent") {
  LbfgsHistory h(5);
  REQUIRE(h.push({1.0, 0.0}, {1.0, 0.0}));
  const std::vector<double> g = {3.0, -4.0};
  const std::vector<double> d = irfit::two_loop_direction(g, h);
  CHECK(d[0] == doctest::Approx(-3.0).epsilon(1e-14));
  CHECK(d[1] == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("two-loop hand-worked single pair") {
  LbfgsHistory h(5);
  REQUIRE(h.push({1.0, 0.0}, {0.5, 0.0}));
  // rho = 2, gamma = 2; alpha = 6; q = (0, 4) -> (0, 8); beta = 0;
  // q += 6 * s -> (6, 8); direction = -(6, 8).
  const std::vector<double> d = irfit::two_loop_direction({3.0, 4.0}, h);
  CHECK(d[0] == doctest::Approx(-6.0).epsilon(1e-14));
  CHECK(d[1] == doctest::Approx(-8.0).epsilon(1e-14));
}

TEST_CASE("two-loop always yields a descent direction") {
  irfit::Rng rng(515);
  const int dim = 5;
  for (int rep = 0; rep < 300; ++rep) {
    LbfgsHistory h(10);
    const int n_pairs = 1 + rng.uniform_int(10);
    for (int p = 0; p < n_pairs; ++p) {
      std::vector<double> s(dim), y(dim);
      for (int i = 0; i < dim; ++i) {
        s[static_cast<std::size_t>(i)] = rng.uniform(-1.0, 1.0);
        // y = D s with positive diagonal keeps s'y > 0.
        y[static_cast<std::size_t>(i)] =
            s[static_cast<std::size_t>(i)] * rng.uniform(0.1, 10.0);
      }
      h.push(std::move(s), std::move(y));
    }
    for (int gi = 0; gi < 3; ++gi) {
      std::vector<double> g(dim);
      for (int i = 0; i < dim; ++i) {
        const double mag = rng.uniform(0.2, 1.0);
        g[static_cast<std::size_t>(i)] = rng.uniform() < 0.5 ? -mag : mag;
      }
      const std::vector<double> d = irfit::two_loop_direction(g, h);
      CHECK(dot(d, g) < 0.0);
    }
  }
}

TEST_CASE("quadratic bowl is solved to machine precision") {
  const LbfgsConfig cfg = wide_config(2);
  const irfit::OptimResult r =
      irfit::lbfgs_minimize(sphere_cost, sphere_grad, {3.0, -4.0}, cfg);
  CHECK(r.converged);
  CHECK(r.termination == Termination::Converged);
  CHECK(r.best_cost < 1e-16);
  CHECK(r.best_vector[0] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(r.best_vector[1] == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(r.iterations_used < 50);
}

TEST_CASE("rosenbrock valley is followed to the optimum") {
  const LbfgsConfig cfg = wide_config(2, -2.0, 2.0);
  const irfit::OptimResult r =
      irfit::lbfgs_minimize(rosen_cost, rosen_grad, {-1.2, 1.0}, cfg);
  CHECK(r.converged);
  CHECK(r.best_cost < 1e-12);
  CHECK(r.best_vector[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.best_vector[1] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("an ill-conditioned quadratic still converges") {
  const std::vector<double> kappa = {1.0, 10.0, 100.0, 1e3, 1e4};
  const irfit::CostFn cost = [&kappa](const std::vector<double>& x) {
    double total = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) total += kappa[i] * x[i] * x[i];
    return total;
  };
  const irfit::GradFn grad = [&kappa](const std::vector<double>& x) {
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = 2.0 * kappa[i] * x[i];
    return g;
  };
  const LbfgsConfig cfg = wide_config(5, -10.0, 10.0);
  const irfit::OptimResult r =
      irfit::lbfgs_minimize(cost, grad, {1.0, 1.0, 1.0, 1.0, 1.0}, cfg);
  CHECK(r.converged);
  CHECK(r.best_cost < 1e-12);
}

TEST_CASE("minimum outside the box lands on the active bound") {
  LbfgsConfig cfg = wide_config(1, 0.0, 2.0);
  const irfit::CostFn cost = [](const std::vector<double>& x) {
    return (x[0] - 5.0) * (x[0] - 5.0);
  };
  const irfit::GradFn grad = [](const std::vector<double>& x) {
    return std::vector<double>{2.0 * (x[0] - 5.0)};
  };
  const irfit::OptimResult r = irfit::lbfgs_minimize(cost, grad, {1.0}, cfg);
  CHECK(r.converged);
  CHECK(r.best_vector[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.best_cost == doctest::Approx(9.0).epsilon(1e-12));
}

TEST_CASE("a start outside the box is projected in first") {
  LbfgsConfig cfg = wide_config(1, 0.0, 2.0);
  const irfit::CostFn cost = [](const std::vector<double>& x) {
    return (x[0] - 5.0) * (x[0] - 5.0);
  };
  const irfit::GradFn grad = [](const std::vector<double>& x) {
    return std::vector<double>{2.0 * (x[0] - 5.0)};
  };
  const irfit::OptimResult r = irfit::lbfgs_minimize(cost, grad, {50.0}, cfg);
  // The projected start already has zero projected gradient.
  CHECK(r.converged);
  CHECK(r.iterations_used == 0);
  CHECK(r.function_evaluations == 1);
  CHECK(r.best_vector[0] == 2.0);
}

TEST_CASE("corner solution of a separable bowl") {
  LbfgsConfig cfg;
  cfg.bounds = Bounds({0.0, 0.0}, {2.0, 2.0});
  const irfit::CostFn cost = [](const std::vector<double>& x) {
    const double a = x[0] - 10.0;
    const double b = x[1] - 10.0;
    return a * a + b * b;
  };
  const irfit::GradFn grad = [](const std::vector<double>& x) {
    return std::vector<double>{2.0 * (x[0] - 10.0), 2.0 * (x[1] - 10.0)};
  };
  const irfit::OptimResult r =
      irfit::lbfgs_minimize(cost, grad, {0.5, 1.5}, cfg);
  CHECK(r.converged);
  CHECK(r.best_vector[0] == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(r.best_vector[1] == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("exhausting the evaluation budget is reported as such") {
  LbfgsConfig cfg = wide_config(2, -2.0, 2.0);
  cfg.max_function_evaluations = 3;
  const irfit::OptimResult r =
      irfit::lbfgs_minimize(rosen_cost, rosen_grad, {-1.2, 1.0}, cfg);
  CHECK_FALSE(r.converged);
  CHECK(r.termination == Termination::MaxEvals);
  CHECK(r.function_evaluations <= 4);
}

TEST_CASE("exhausting the iteration budget is reported as such") {
  LbfgsConfig cfg = wide_config(2, -2.0, 2.0);
  cfg.max_iterations = 2;
  const irfit::OptimResult r =
      irfit::lbfgs_minimize(rosen_cost, rosen_grad, {-1.2, 1.0}, cfg);
  CHECK_FALSE(r.converged);
  CHECK(r.termination == Termination::MaxIters);
  CHECK(r.iterations_used == 2);
}

TEST_CASE("a gradient inconsistent with a flat cost fails the line search") {
  LbfgsConfig cfg;
  cfg.bounds = Bounds({0.0, 0.0}, {1.0, 1.0});
  const irfit::CostFn cost = [](const std::vector<double>&) { return 0.0; };
  const irfit::GradFn grad = [](const std::vector<double>&) {
    return std::vector<double>{1.0, 0.0};
  };
  const irfit::OptimResult r =
      irfit::lbfgs_minimize(cost, grad, {0.5, 0.5}, cfg);
  CHECK_FALSE(r.converged);
  CHECK(r.termination == Termination::LineSearchFailure);
  CHECK(r.best_cost == 0.0);
  CHECK(r.best_vector == std::vector<double>{0.5, 0.5});
}

TEST_CASE("a NaN wall mid-run ends with the best point found") {
  LbfgsConfig cfg = wide_config(1, -10.0, 10.0);
  const irfit::CostFn cost = [](const std::vector<double>& x) {
    if (x[0] < 2.0) return std::nan("");
    return x[0] * x[0];
  };
  const irfit::GradFn grad = [](const std::vector<double>& x) {
    return std::vector<double>{2.0 * x[0]};
  };
  const irfit::OptimResult r = irfit::lbfgs_minimize(cost, grad, {4.0}, cfg);
  CHECK_FALSE(r.converged);
  CHECK(r.termination == Termination::LineSearchFailure);
  CHECK(std::isfinite(r.best_cost));
  CHECK(r.best_vector[0] >= 2.0);
  CHECK(r.best_cost == doctest::Approx(4.0).epsilon(1e-2));
}

TEST_CASE("non-finite start is a domain error") {
  const LbfgsConfig cfg = wide_config(1);
  const irfit::GradFn grad = [](const std::vector<double>& x) {
    return std::vector<double>{2.0 * x[0]};
  };
  CHECK_THROWS_AS(
      irfit::lbfgs_minimize([](const std::vector<double>&) { return std::nan(""); },
                            grad, {1.0}, cfg),
      std::domain_error);
  const irfit::CostFn fine = [](const std::vector<double>& x) {
    return x[0] * x[0];
  };
  const irfit::GradFn poisoned = [](const std::vector<double>&) {
    return std::vector<double>{std::numeric_limits<double>::infinity()};
  };
  CHECK_THROWS_AS(irfit::lbfgs_minimize(fine, poisoned, {1.0}, cfg),
                  std::domain_error);
}

TEST_CASE("dimension mismatch is rejected") {
  const LbfgsConfig cfg = wide_config(2);
  CHECK_THROWS_AS(
      irfit::lbfgs_minimize(sphere_cost, sphere_grad, {1.0}, cfg),
      std::invalid_argument);
}

TEST_CASE("a single-pair history is enough") {
  LbfgsConfig cfg = wide_config(2);
  cfg.history_size = 1;
  const irfit::OptimResult r =
      irfit::lbfgs_minimize(sphere_cost, sphere_grad, {30.0, -40.0}, cfg);
  CHECK(r.converged);
  CHECK(r.best_cost < 1e-14);
}
