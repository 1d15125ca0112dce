#include "glio/control.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace glio {

ControlSchedule ControlSchedule::constant(const TimeGrid& grid, double c, double s) {
  return {grid, std::vector<double>(grid.n_steps, c), std::vector<double>(grid.n_steps, s)};
}

void ControlSchedule::validate() const {
  if (c.size() != grid.n_steps || s.size() != grid.n_steps) {
    throw std::invalid_argument("control schedule needs " + std::to_string(grid.n_steps) + " values per control");
  }
}

void AdmissibleSet::validate(const TimeGrid& grid) const {
  if (!(c_max > 0.0)) throw std::invalid_argument("c_max must be positive");
  if (!(upper > 0.0)) throw std::invalid_argument("upper control bound must be positive");
  if (!(omega_area > 0.0)) throw std::invalid_argument("domain area must be positive");
  if (!(c_max < grid.t_final() * omega_area * upper)) {
    throw std::invalid_argument("c_max must be smaller than T |Omega| (otherwise the budget never binds)");
  }
}

double evaluate_budget(std::span<const double> c, const TimeGrid& grid) {
  if (c.size() != grid.n_steps) throw std::invalid_argument("budget: control length does not match the time grid");
  double sum = 0.0;
  for (double v : c) sum += v;
  return grid.dt * sum;
}

double evaluate_budget(std::span<const double> c, std::span<const double> weight, const TimeGrid& grid) {
  if (c.size() != grid.n_steps || weight.size() != c.size()) {
    throw std::invalid_argument("budget: control length does not match the time grid");
  }
  double sum = 0.0;
  for (std::size_t n = 0; n < c.size(); ++n) sum += weight[n] * c[n];
  return grid.dt * sum;
}

std::vector<double> clamp_box(std::span<const double> v, double upper) {
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [upper](double x) { return std::clamp(x, 0.0, upper); });
  return out;
}

namespace {
constexpr double kBudgetTol = 1e-10;
}  // namespace

BudgetProjection project_budget(std::span<const double> c, const AdmissibleSet& set, const TimeGrid& grid,
                                std::span<const double> weight) {
  if (!(set.c_max > 0.0)) throw std::invalid_argument("project_budget: c_max must be positive");
  if (c.size() != grid.n_steps) throw std::invalid_argument("project_budget: control length does not match the grid");
  std::vector<double> w(weight.begin(), weight.end());
  if (w.empty()) w.assign(c.size(), set.omega_area);
  if (w.size() != c.size()) throw std::invalid_argument("project_budget: weight length does not match the grid");
  for (double x : w) {
    if (!(x > 0.0)) throw std::invalid_argument("project_budget: weights must be positive");
  }

  auto shifted = [&](double lambda) {
    std::vector<double> out(c.size());
    for (std::size_t n = 0; n < c.size(); ++n) out[n] = std::clamp(c[n] - lambda * w[n], 0.0, set.upper);
    return out;
  };

  BudgetProjection result;
  result.values = shifted(0.0);
  double budget_lo = evaluate_budget(result.values, w, grid);
  // Same tolerance as the case-ii stopping rule, so outputs are fixed points.
  if (budget_lo <= set.c_max + kBudgetTol) return result;

  double lo = 0.0;
  double hi = 0.0;
  for (std::size_t n = 0; n < c.size(); ++n) hi = std::max(hi, c[n] / w[n]);
  double budget_hi = 0.0;  // every entry clamps to zero at hi

  constexpr int kMaxIterations = 200;
  for (int it = 1; it <= kMaxIterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    auto candidate = shifted(mid);
    const double budget = evaluate_budget(candidate, w, grid);
    // The budget is nonincreasing in lambda.
    if (budget > budget_lo || budget < budget_hi) throw std::logic_error("project_budget: budget is not monotone in lambda");
    if (std::abs(budget - set.c_max) <= kBudgetTol) {
      result.values = std::move(candidate);
      result.lambda = mid;
      result.iterations = it;
      return result;
    }
    if (budget > set.c_max) {
      lo = mid;
      budget_lo = budget;
    } else {
      hi = mid;
      budget_hi = budget;
    }
  }
  throw std::runtime_error("project_budget: bisection did not meet the budget within 200 iterations");
}

ProjectedControls project(const ControlSchedule& tentative, const AdmissibleSet& set) {
  tentative.validate();
  auto c = project_budget(tentative.c, set, tentative.grid);
  ProjectedControls out;
  out.controls.grid = tentative.grid;
  out.controls.c = std::move(c.values);
  out.controls.s = clamp_box(tentative.s, set.upper);
  out.lambda = c.lambda;
  return out;
}

bool is_feasible(const ControlSchedule& controls, const AdmissibleSet& set, double tol) {
  auto in_box = [&](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x >= 0.0 && x <= set.upper; });
  };
  return in_box(controls.c) && in_box(controls.s) &&
         set.omega_area * evaluate_budget(controls.c, controls.grid) <= set.c_max + tol;
}

}  // namespace glio
