#include "glio/state.hpp"

#include <stdexcept>
#include <string>

#include "glio/errors.hpp"

namespace glio {

StepControl StepControl::uniform(const Mesh& mesh, double c, double s) {
  const auto n = static_cast<Eigen::Index>(3 * mesh.num_triangles());
  return {QuadratureField::Constant(n, c), QuadratureField::Constant(n, s)};
}

QuadratureField michaelis_denominator(const QuadratureField& sigma_q, const ModelParams& params) {
  QuadratureField d = sigma_q.array() + params.k_ox;
  for (Eigen::Index k = 0; k < d.size(); ++k) {
    if (!(d[k] >= 1e-12)) {
      throw NumericError("Michaelis denominator k_ox + sigma = " + std::to_string(d[k]) + " at quadrature point " +
                         std::to_string(k));
    }
  }
  return d;
}

SparseMatrix tumor_matrix(const P1Space& space, const FeFunction& u_prev, const FeFunction& sigma_prev,
                          const QuadratureField& c_q, const ModelParams& params, double dt) {
  const Mesh& mesh = space.mesh();
  const QuadratureField u_q = space.at_quadrature(u_prev);
  const QuadratureField s_q = space.at_quadrature(sigma_prev);
  QuadratureField reaction(s_q.size());
  for (Eigen::Index k = 0; k < s_q.size(); ++k) {
    reaction[k] = -rho(s_q[k], params) * (params.alpha - u_q[k]) + params.kappa * c_q[k] * s_q[k];
  }
  const auto grad_sigma = gradient(mesh, sigma_prev);
  return (1.0 / dt) * space.mass() + params.D_u * space.stiffness() + assemble_weighted_mass(mesh, reaction) -
         params.chi * assemble_convection(mesh, grad_sigma);
}

SparseMatrix oxygen_matrix(const P1Space& space, const FeFunction& u_next, const FeFunction& sigma_prev,
                           const ModelParams& params, double dt) {
  const QuadratureField u_q = space.at_quadrature(u_next);
  const QuadratureField denom = michaelis_denominator(space.at_quadrature(sigma_prev), params);
  const QuadratureField consumption = params.A_ox * u_q.array() / denom.array();
  return (1.0 / dt + params.gamma) * space.mass() + params.D_sigma * space.stiffness() +
         assemble_weighted_mass(space.mesh(), consumption);
}

Vector oxygen_rhs(const P1Space& space, const FeFunction& sigma_prev, const FeFunction& u_next,
                  const QuadratureField& s_q, const ModelParams& params, double dt) {
  const QuadratureField u_q = space.at_quadrature(u_next);
  const QuadratureField supply = (1.0 - s_q.array()) * params.S_c * u_q.array();
  return space.mass() * sigma_prev / dt + params.gamma * params.beta * space.lumped_ones() +
         load_vector(space.mesh(), supply);
}

std::pair<FeFunction, FeFunction> step_state(const P1Space& space, const FeFunction& u_prev,
                                             const FeFunction& sigma_prev, const StepControl& control,
                                             const ModelParams& params, double dt, StepSources sources) {
  const auto n = static_cast<Eigen::Index>(space.size());
  if (u_prev.size() != n || sigma_prev.size() != n) throw std::invalid_argument("step_state: field size mismatch");

  Vector rhs_u = space.mass() * u_prev / dt;
  if (sources.u) rhs_u += *sources.u;
  FeFunction u_next =
      solve_sparse(tumor_matrix(space, u_prev, sigma_prev, control.c, params, dt), rhs_u, SolveHint::general);
  check_finite(u_next, "tumor solve");

  Vector rhs_s = oxygen_rhs(space, sigma_prev, u_next, control.s, params, dt);
  if (sources.sigma) rhs_s += *sources.sigma;
  FeFunction sigma_next =
      solve_sparse(oxygen_matrix(space, u_next, sigma_prev, params, dt), rhs_s, SolveHint::spd);
  check_finite(sigma_next, "oxygen solve");
  return {std::move(u_next), std::move(sigma_next)};
}

std::pair<FeFunction, FeFunction> step_state(const P1Space& space, const FeFunction& u_prev,
                                             const FeFunction& sigma_prev, double c, double s,
                                             const ModelParams& params, double dt) {
  return step_state(space, u_prev, sigma_prev, StepControl::uniform(space.mesh(), c, s), params, dt);
}

StateTrajectory run_state(const P1Space& space, const FeFunction& u0, const FeFunction& sigma0,
                          const ControlSchedule& controls, const ModelParams& params) {
  controls.validate();
  const TimeGrid& grid = controls.grid;
  grid.validate();
  StateTrajectory traj{grid, {u0}, {sigma0}};
  traj.u.reserve(grid.n_steps + 1);
  traj.sigma.reserve(grid.n_steps + 1);
  for (std::size_t n = 0; n < grid.n_steps; ++n) {
    try {
      auto [u, sigma] = step_state(space, traj.u.back(), traj.sigma.back(), controls.c[n], controls.s[n], params,
                                   grid.dt);
      traj.u.push_back(std::move(u));
      traj.sigma.push_back(std::move(sigma));
    } catch (const SolverError& e) {
      throw SteppingError(e.what(), n + 1);
    } catch (const NumericError& e) {
      throw SteppingError(e.what(), n + 1);
    }
  }
  return traj;
}

}  // namespace glio
