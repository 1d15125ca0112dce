#include "glio/cost.hpp"

#include <stdexcept>

namespace glio {

namespace {

double quadratic(const SparseMatrix& m, const Vector& v) { return v.dot(m * v); }

void require_aligned(const StateTrajectory& states, const ControlSchedule& controls) {
  controls.validate();
  if (!(states.grid == controls.grid)) throw std::invalid_argument("states and controls use different time grids");
  if (states.u.size() != states.grid.n_steps + 1 || states.sigma.size() != states.grid.n_steps + 1) {
    throw std::invalid_argument("state trajectory does not cover the time grid");
  }
}

}  // namespace

void ControlProblem::validate() const {
  if (!space) throw std::invalid_argument("control problem has no discretization");
  const auto n = static_cast<Eigen::Index>(space->size());
  if (u0.size() != n || sigma0.size() != n) throw std::invalid_argument("initial data size does not match the mesh");
  params.validate();
  weights.validate();
  grid.validate();
  admissible.validate(grid);
}

CostBreakdown cost_breakdown(const P1Space& space, const StateTrajectory& states, const ControlSchedule& controls,
                             const CostWeights& weights, double omega_area) {
  require_aligned(states, controls);
  const TimeGrid& grid = states.grid;
  const SparseMatrix& m = space.mass();
  const Vector ones = Vector::Ones(static_cast<Eigen::Index>(space.size()));

  CostBreakdown out;
  for (std::size_t n = 1; n <= grid.n_steps; ++n) {
    out.tumor += grid.dt * 0.5 * weights.k1 * quadratic(m, states.u[n]);
    out.oxygen += grid.dt * 0.5 * weights.k2 * quadratic(m, states.sigma[n] - weights.sigma_Q * ones);
  }
  for (std::size_t j = 0; j < grid.n_steps; ++j) {
    out.chemo += grid.dt * weights.k3 * controls.c[j] * omega_area;
    out.antiangio += grid.dt * weights.k4 * controls.s[j] * omega_area;
  }
  const std::size_t last = grid.n_steps;
  out.tumor_final = 0.5 * weights.l1 * quadratic(m, states.u[last]);
  out.oxygen_final = 0.5 * weights.l2 * quadratic(m, states.sigma[last] - weights.sigma_Omega * ones);
  return out;
}

double evaluate_cost(const P1Space& space, const StateTrajectory& states, const ControlSchedule& controls,
                     const CostWeights& weights, double omega_area) {
  return cost_breakdown(space, states, controls, weights, omega_area).total();
}

ReducedGradient reduced_gradient(const P1Space& space, const StateTrajectory& states, const AdjointTrajectory& adjoints,
                                 const CostWeights& weights, const ModelParams& params, double omega_area) {
  const TimeGrid& grid = states.grid;
  if (!(adjoints.grid == grid)) throw std::invalid_argument("reduced_gradient: states and adjoints use different grids");
  if (adjoints.p1.size() != grid.n_steps + 1 || states.u.size() != grid.n_steps + 1) {
    throw std::invalid_argument("reduced_gradient: incomplete trajectories");
  }
  ReducedGradient g{std::vector<double>(grid.n_steps), std::vector<double>(grid.n_steps)};
  for (std::size_t j = 0; j < grid.n_steps; ++j) {
    const QuadratureField u_q = space.at_quadrature(states.u[j + 1]);
    const QuadratureField s_q = space.at_quadrature(states.sigma[j]);
    const QuadratureField p1_q = space.at_quadrature(adjoints.p1[j]);
    const QuadratureField p2_q = space.at_quadrature(adjoints.p2[j]);
    g.d_c[j] = weights.k3 * omega_area -
               params.kappa * space.integrate(p1_q.cwiseProduct(s_q).cwiseProduct(u_q));
    g.d_s[j] = weights.k4 * omega_area - params.S_c * space.integrate(p2_q.cwiseProduct(u_q));
  }
  return g;
}

double directional_derivative(const ReducedGradient& g, const ControlDirection& direction, const TimeGrid& grid) {
  if (direction.dc.size() != g.d_c.size() || direction.ds.size() != g.d_s.size()) {
    throw std::invalid_argument("directional_derivative: length mismatch");
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < g.d_c.size(); ++j) sum += g.d_c[j] * direction.dc[j] + g.d_s[j] * direction.ds[j];
  return grid.dt * sum;
}

double evaluate_reduced_cost(const ControlProblem& problem, const ControlSchedule& controls) {
  const auto states = run_state(*problem.space, problem.u0, problem.sigma0, controls, problem.params);
  return evaluate_cost(*problem.space, states, controls, problem.weights, problem.admissible.omega_area);
}

Evaluation evaluate_with_gradient(const ControlProblem& problem, const ControlSchedule& controls) {
  Evaluation out;
  out.states = run_state(*problem.space, problem.u0, problem.sigma0, controls, problem.params);
  out.cost = evaluate_cost(*problem.space, out.states, controls, problem.weights, problem.admissible.omega_area);
  out.adjoints = run_adjoint(*problem.space, out.states, controls, problem.weights, problem.params);
  out.gradient = reduced_gradient(*problem.space, out.states, out.adjoints, problem.weights, problem.params,
                                  problem.admissible.omega_area);
  return out;
}

double fd_gradient_oracle(const ControlProblem& problem, const ControlSchedule& controls,
                          const ControlDirection& direction, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("fd_gradient_oracle: eps must be positive");
  controls.validate();
  if (direction.dc.size() != controls.c.size() || direction.ds.size() != controls.s.size()) {
    throw std::invalid_argument("fd_gradient_oracle: direction length mismatch");
  }
  ControlSchedule perturbed = controls;
  for (std::size_t j = 0; j < controls.c.size(); ++j) {
    perturbed.c[j] += eps * direction.dc[j];
    perturbed.s[j] += eps * direction.ds[j];
  }
  const double base = evaluate_reduced_cost(problem, controls);
  const double moved = evaluate_reduced_cost(problem, perturbed);
  return (moved - base) / eps;
}

DualityCheck duality_identity(const P1Space& space, const StateTrajectory& states, const AdjointTrajectory& adjoints,
                              const SensitivityTrajectory& sensitivity, const ControlDirection& direction,
                              const CostWeights& weights, const ModelParams& params) {
  const TimeGrid& grid = states.grid;
  const SparseMatrix& m = space.mass();
  const Vector ones = Vector::Ones(static_cast<Eigen::Index>(space.size()));
  const std::size_t last = grid.n_steps;

  DualityCheck out;
  out.sensitivity_side = weights.l1 * sensitivity.z1[last].dot(m * states.u[last]) +
                         weights.l2 * sensitivity.z2[last].dot(m * (states.sigma[last] - weights.sigma_Omega * ones));
  for (std::size_t n = 1; n <= last; ++n) {
    out.sensitivity_side += grid.dt * (weights.k1 * sensitivity.z1[n].dot(m * states.u[n]) +
                                       weights.k2 * sensitivity.z2[n].dot(m * (states.sigma[n] - weights.sigma_Q * ones)));
  }
  // Control-weight terms cancel between the two sides, so pass zero k3, k4.
  CostWeights state_only = weights;
  state_only.k3 = 0.0;
  state_only.k4 = 0.0;
  const auto g = reduced_gradient(space, states, adjoints, state_only, params, 0.0);
  out.adjoint_side = directional_derivative(g, direction, grid);
  return out;
}

}  // namespace glio
