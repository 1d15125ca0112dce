#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "glio/control.hpp"

using namespace glio;

namespace {

// Exact Euclidean projection onto {0 <= x <= u, dt sum w x <= c_max} by
// walking the breakpoints of the piecewise-linear budget(lambda).
std::vector<double> breakpoint_projection(const std::vector<double>& c, const std::vector<double>& w, double dt,
                                          double c_max, double upper, double* lambda_out) {
  auto budget = [&](double lambda) {
    double b = 0.0;
    for (std::size_t n = 0; n < c.size(); ++n) b += dt * w[n] * std::clamp(c[n] - lambda * w[n], 0.0, upper);
    return b;
  };
  auto apply = [&](double lambda) {
    std::vector<double> out(c.size());
    for (std::size_t n = 0; n < c.size(); ++n) out[n] = std::clamp(c[n] - lambda * w[n], 0.0, upper);
    return out;
  };
  if (budget(0.0) <= c_max) {
    *lambda_out = 0.0;
    return apply(0.0);
  }
  std::vector<double> bp{0.0};
  for (std::size_t n = 0; n < c.size(); ++n) {
    for (double v : {c[n] / w[n], (c[n] - upper) / w[n]})
      if (v > 0.0) bp.push_back(v);
  }
  std::sort(bp.begin(), bp.end());
  for (std::size_t i = 1; i < bp.size(); ++i) {
    const double b0 = budget(bp[i - 1]), b1 = budget(bp[i]);
    if (b0 >= c_max && b1 <= c_max) {
      const double lambda = b0 == b1 ? bp[i] : bp[i - 1] + (b0 - c_max) * (bp[i] - bp[i - 1]) / (b0 - b1);
      *lambda_out = lambda;
      return apply(lambda);
    }
  }
  FAIL("breakpoint oracle found no bracket");
  return {};
}

double distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

std::vector<double> random_vector(std::mt19937& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

}  // namespace

TEST_CASE("budget quadrature") {
  const TimeGrid grid{0.008, 250};
  CHECK(evaluate_budget(std::vector<double>(250, 0.1), grid) == doctest::Approx(0.2).epsilon(1e-13));
  CHECK(evaluate_budget(std::vector<double>(250, 0.0), grid) == 0.0);
  CHECK(evaluate_budget(std::vector<double>(250, 1.0), grid) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK_THROWS_AS(evaluate_budget(std::vector<double>(3, 1.0), grid), std::invalid_argument);
  const std::vector<double> w{2.0, 0.5};
  CHECK(evaluate_budget(std::vector<double>{1.0, 1.0}, w, TimeGrid{0.5, 2}) == doctest::Approx(1.25));
}

TEST_CASE("box clamp") {
  CHECK(clamp_box(std::vector<double>{-0.5, 0.3, 1.7}) == std::vector<double>{0.0, 0.3, 1.0});
  const std::vector<double> ok{0.0, 0.25, 1.0};
  CHECK(clamp_box(ok) == ok);
  CHECK(clamp_box(std::vector<double>(4, 2.0)) == std::vector<double>(4, 1.0));
  std::mt19937 rng(1);
  for (int t = 0; t < 50; ++t) {
    auto v = random_vector(rng, 20, -2, 3);
    auto once = clamp_box(v);
    CHECK(clamp_box(once) == once);
  }
}

TEST_CASE("budget projection examples") {
  AdmissibleSet set;
  set.c_max = 0.25;
  const TimeGrid grid{0.008, 250};

  auto slack = project_budget(std::vector<double>(250, 0.1), set, grid);
  CHECK(slack.lambda == 0.0);
  for (double v : slack.values) CHECK(v == 0.1);

  auto full = project_budget(std::vector<double>(250, 1.0), set, grid);
  CHECK(std::abs(full.lambda - 0.875) <= 1e-10);
  for (double v : full.values) CHECK(std::abs(v - 0.125) <= 1e-10);
  CHECK(std::abs(evaluate_budget(full.values, grid) - 0.25) <= 1e-10);

  AdmissibleSet half;
  half.c_max = 0.5;
  const TimeGrid coarse{1.0, 2};
  auto two = project_budget(std::vector<double>{1.0, 0.0}, half, coarse);
  CHECK(std::abs(two.lambda - 0.5) <= 1e-10);
  CHECK(std::abs(two.values[0] - 0.5) <= 1e-10);
  CHECK(two.values[1] == 0.0);

  AdmissibleSet bad;
  bad.c_max = 0.0;
  CHECK_THROWS_AS(project_budget(std::vector<double>(250, 1.0), bad, grid), std::invalid_argument);
}

TEST_CASE("admissible set validation") {
  const TimeGrid grid{0.008, 250};
  AdmissibleSet set;
  CHECK_NOTHROW(set.validate(grid));
  set.c_max = 2.0;
  CHECK_THROWS_AS(set.validate(grid), std::invalid_argument);
  set.c_max = -1.0;
  CHECK_THROWS_AS(set.validate(grid), std::invalid_argument);
}

TEST_CASE("projection agrees with the breakpoint oracle") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> cm(0.05, 1.5);
  for (int trial = 0; trial < 100; ++trial) {
    const TimeGrid grid{0.04, 50};
    AdmissibleSet set;
    set.c_max = cm(rng);
    const auto c = random_vector(rng, 50, -0.5, 1.5);
    const auto p = project_budget(c, set, grid);
    double lambda = -1.0;
    const auto oracle = breakpoint_projection(c, std::vector<double>(50, 1.0), grid.dt, set.c_max, 1.0, &lambda);
    CHECK(distance(p.values, oracle) <= 1e-8);
    CHECK(std::abs(p.lambda - lambda) <= 1e-8);
  }
}

TEST_CASE("weighted projection agrees with the breakpoint oracle") {
  std::mt19937 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const TimeGrid grid{0.1, 20};
    AdmissibleSet set;
    set.c_max = 0.3;
    const auto c = random_vector(rng, 20, -0.2, 1.4);
    const auto w = random_vector(rng, 20, 0.2, 3.0);
    const auto p = project_budget(c, set, grid, w);
    double lambda = -1.0;
    const auto oracle = breakpoint_projection(c, w, grid.dt, set.c_max, 1.0, &lambda);
    CHECK(distance(p.values, oracle) <= 1e-8);
    CHECK(evaluate_budget(p.values, w, grid) <= set.c_max + 1e-10);
  }
}

TEST_CASE("projection properties on random inputs") {
  std::mt19937 rng(2024);
  const TimeGrid grid{0.04, 50};
  AdmissibleSet set;
  set.c_max = 0.25;
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_vector(rng, 50, -1, 2);
    const auto b = random_vector(rng, 50, -1, 2);
    const auto pa = project_budget(a, set, grid);
    const auto pb = project_budget(b, set, grid);

    // Feasible.
    for (double v : pa.values) CHECK((v >= 0.0 && v <= 1.0));
    CHECK(evaluate_budget(pa.values, grid) <= set.c_max + 1e-10);
    // Exactly one case.
    const double budget = evaluate_budget(pa.values, grid);
    if (pa.lambda == 0.0) {
      CHECK(budget <= set.c_max + 1e-10);
      CHECK(pa.values == clamp_box(a));
    } else {
      CHECK(pa.lambda > 0.0);
      CHECK(std::abs(budget - set.c_max) <= 1e-10);
    }
    // Idempotent.
    const auto again = project_budget(pa.values, set, grid);
    CHECK(distance(again.values, pa.values) <= 1e-10);
    // Non-expansive.
    CHECK(distance(pa.values, pb.values) <= distance(a, b) + 1e-12);
  }
}

TEST_CASE("joint projection and feasibility") {
  const TimeGrid grid{0.04, 50};
  AdmissibleSet set;
  auto tentative = ControlSchedule::constant(grid, 0.9, 1.4);
  tentative.s[3] = -0.2;
  CHECK_FALSE(is_feasible(tentative, set));
  const auto p = project(tentative, set);
  CHECK(is_feasible(p.controls, set));
  CHECK(p.controls.s[0] == 1.0);
  CHECK(p.controls.s[3] == 0.0);
  CHECK(p.lambda > 0.0);

  // The domain area scales the budget.
  AdmissibleSet wide;
  wide.omega_area = 2.0;
  const auto q = project(ControlSchedule::constant(grid, 1.0, 0.0), wide);
  CHECK(std::abs(2.0 * evaluate_budget(q.controls.c, grid) - 0.25) <= 1e-10);
  CHECK(is_feasible(q.controls, wide));

  ControlSchedule broken{grid, std::vector<double>(3), std::vector<double>(50)};
  CHECK_THROWS_AS(broken.validate(), std::invalid_argument);
}
