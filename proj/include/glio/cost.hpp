#pragma once

#include <memory>
#include <vector>

#include "glio/adjoint.hpp"
#include "glio/control.hpp"
#include "glio/cost_weights.hpp"
#include "glio/fem.hpp"
#include "glio/model.hpp"
#include "glio/sensitivity.hpp"
#include "glio/state.hpp"

namespace glio {

// Everything needed to evaluate the reduced cost of a control schedule.
struct ControlProblem {
  std::shared_ptr<const P1Space> space;
  FeFunction u0;
  FeFunction sigma0;
  ModelParams params;
  CostWeights weights;
  AdmissibleSet admissible;
  TimeGrid grid;

  void validate() const;
};

// Running part uses the right-endpoint rule over t_1..t_N; spatial integrals
// are exact P1 quadratic forms. Control terms carry the domain area.
double evaluate_cost(const P1Space& space, const StateTrajectory& states, const ControlSchedule& controls,
                     const CostWeights& weights, double omega_area);

// Per-step cost contributions, used by the additivity checks and reporting.
struct CostBreakdown {
  double tumor = 0.0;          // k1 running
  double oxygen = 0.0;         // k2 running
  double chemo = 0.0;          // k3
  double antiangio = 0.0;      // k4
  double tumor_final = 0.0;    // l1
  double oxygen_final = 0.0;   // l2

  double total() const { return tumor + oxygen + chemo + antiangio + tumor_final + oxygen_final; }
};
CostBreakdown cost_breakdown(const P1Space& space, const StateTrajectory& states, const ControlSchedule& controls,
                             const CostWeights& weights, double omega_area);

struct ReducedGradient {
  std::vector<double> d_c;
  std::vector<double> d_s;
};

// d_c[j] = k3 |Omega| - kappa (p1[j] sigma^j u^{j+1}, 1), d_s[j] = k4 |Omega| -
// S_c (p2[j] u^{j+1}, 1). The derivative of J with respect to c_j is dt d_c[j].
ReducedGradient reduced_gradient(const P1Space& space, const StateTrajectory& states, const AdjointTrajectory& adjoints,
                                 const CostWeights& weights, const ModelParams& params, double omega_area);

// sum_j dt (d_c[j] dc[j] + d_s[j] ds[j]).
double directional_derivative(const ReducedGradient& g, const ControlDirection& direction, const TimeGrid& grid);

struct Evaluation {
  StateTrajectory states;
  AdjointTrajectory adjoints;
  ReducedGradient gradient;
  double cost = 0.0;
};

double evaluate_reduced_cost(const ControlProblem& problem, const ControlSchedule& controls);
Evaluation evaluate_with_gradient(const ControlProblem& problem, const ControlSchedule& controls);

// (J(c + eps d) - J(c)) / eps from two forward solves; no projection is applied.
double fd_gradient_oracle(const ControlProblem& problem, const ControlSchedule& controls,
                          const ControlDirection& direction, double eps);

// The two sides of the discrete duality identity for a given direction:
// the state-cost derivative paired with the sensitivities, and the adjoint
// pairing with the control sources. They agree up to solver tolerance.
struct DualityCheck {
  double sensitivity_side = 0.0;
  double adjoint_side = 0.0;
};
DualityCheck duality_identity(const P1Space& space, const StateTrajectory& states, const AdjointTrajectory& adjoints,
                              const SensitivityTrajectory& sensitivity, const ControlDirection& direction,
                              const CostWeights& weights, const ModelParams& params);

}  // namespace glio
