#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "glio/grid.hpp"

namespace glio {

// Time-only controls, piecewise constant: entry n applies on (t_n, t_{n+1}].
struct ControlSchedule {
  TimeGrid grid;
  std::vector<double> c;  // chemotherapy
  std::vector<double> s;  // antiangiogenic therapy

  static ControlSchedule constant(const TimeGrid& grid, double c, double s);

  // Throws std::invalid_argument if c or s does not have one value per step.
  void validate() const;
};

// Per-step control variation (c-bar - c*, s-bar - s*).
struct ControlDirection {
  std::vector<double> dc;
  std::vector<double> ds;

  static ControlDirection zero(std::size_t n) { return {std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)}; }
};

// Pointwise bounds [0, upper] and the budget integral of c over space-time
// bounded by c_max. Controls are spatially constant, so the space integral
// contributes the factor omega_area.
struct AdmissibleSet {
  double c_max = 0.25;
  double upper = 1.0;
  double omega_area = 1.0;

  // Requires 0 < c_max < T |Omega| upper.
  void validate(const TimeGrid& grid) const;
};

// dt * sum c_n.
double evaluate_budget(std::span<const double> c, const TimeGrid& grid);
// dt * sum w_n c_n.
double evaluate_budget(std::span<const double> c, std::span<const double> weight, const TimeGrid& grid);

std::vector<double> clamp_box(std::span<const double> v, double upper = 1.0);

struct BudgetProjection {
  std::vector<double> values;
  // Multiplier of the budget constraint; 0 when the clamped input already fits.
  double lambda = 0.0;
  int iterations = 0;
};

// Projection onto {0 <= c <= upper, dt sum w_n c_n <= c_max}: either the
// clamped input (lambda = 0, budget at most c_max + 1e-10) or
// clamp(c - lambda w) with the budget met to 1e-10, lambda found by
// bisection. An empty weight means w_n = omega_area.
BudgetProjection project_budget(std::span<const double> c, const AdmissibleSet& set, const TimeGrid& grid,
                                std::span<const double> weight = {});

// Projects both controls: c onto the budgeted set, s onto the box.
struct ProjectedControls {
  ControlSchedule controls;
  double lambda = 0.0;
};
ProjectedControls project(const ControlSchedule& tentative, const AdmissibleSet& set);

bool is_feasible(const ControlSchedule& controls, const AdmissibleSet& set, double tol = 1e-10);

}  // namespace glio
