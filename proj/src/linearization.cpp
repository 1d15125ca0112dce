#include "glio/linearization.hpp"

#include <stdexcept>

namespace glio {

StepLinearization linearize_step(const P1Space& space, const StateTrajectory& states, std::size_t j,
                                 const ControlSchedule& controls, const ModelParams& params) {
  if (j >= states.grid.n_steps || states.u.size() != states.grid.n_steps + 1) {
    throw std::out_of_range("linearize_step: step index outside the trajectory");
  }
  const Mesh& mesh = space.mesh();
  const double dt = states.grid.dt;
  const double c = controls.c[j];
  const double s = controls.s[j];
  const FeFunction& u0 = states.u[j];
  const FeFunction& s0 = states.sigma[j];
  const FeFunction& u1 = states.u[j + 1];
  const FeFunction& s1 = states.sigma[j + 1];

  const QuadratureField u0_q = space.at_quadrature(u0);
  const QuadratureField s0_q = space.at_quadrature(s0);
  const QuadratureField u1_q = space.at_quadrature(u1);
  const QuadratureField s1_q = space.at_quadrature(s1);
  const QuadratureField denom = michaelis_denominator(s0_q, params);

  const Eigen::Index nq = u0_q.size();
  QuadratureField growth(nq), cross_weight(nq), coupling(nq), lag(nq);
  for (Eigen::Index k = 0; k < nq; ++k) {
    growth[k] = rho(s0_q[k], params) * u1_q[k];
    cross_weight[k] = rho_prime_clamped(s0_q[k], params) * (params.alpha - u0_q[k]) * u1_q[k] -
                      params.kappa * c * u1_q[k];
    coupling[k] = (1.0 - s) * params.S_c - params.A_ox * s1_q[k] / denom[k];
    lag[k] = params.A_ox * u1_q[k] * s1_q[k] / (denom[k] * denom[k]);
  }

  StepLinearization lin;
  lin.tumor = tumor_matrix(space, u0, s0, QuadratureField::Constant(nq, c), params, dt);
  lin.oxygen = oxygen_matrix(space, u1, s0, params, dt);
  lin.growth_lag = assemble_weighted_mass(mesh, growth);
  lin.oxygen_to_tumor =
      assemble_weighted_mass(mesh, cross_weight) + params.chi * assemble_weighted_stiffness(mesh, u1_q);
  lin.tumor_to_oxygen = assemble_weighted_mass(mesh, coupling);
  lin.oxygen_lag = assemble_weighted_mass(mesh, lag);
  lin.chemo_source = load_vector(mesh, s0_q.cwiseProduct(u1_q));
  lin.angio_source = load_vector(mesh, u1_q);
  return lin;
}

}  // namespace glio
