#pragma once

#include <utility>
#include <vector>

#include "glio/control.hpp"
#include "glio/fem.hpp"
#include "glio/grid.hpp"
#include "glio/model.hpp"

namespace glio {

struct StateTrajectory {
  TimeGrid grid;
  std::vector<FeFunction> u;      // n_steps + 1 entries
  std::vector<FeFunction> sigma;  // n_steps + 1 entries
};

// Controls of one step sampled at the quadrature points.
struct StepControl {
  QuadratureField c;
  QuadratureField s;

  static StepControl uniform(const Mesh& mesh, double c, double s);
};

// Optional assembled load vectors added to the right-hand sides, used by
// manufactured-solution tests.
struct StepSources {
  const Vector* u = nullptr;
  const Vector* sigma = nullptr;
};

// Quadrature-level denominator k_ox + sigma; throws NumericError below 1e-12.
QuadratureField michaelis_denominator(const QuadratureField& sigma_q, const ModelParams& params);

// M/dt + D_u K - W(rho(sigma)(alpha - u)) + kappa W(c sigma) - chi C(grad sigma),
// with u, sigma the previous-step fields.
SparseMatrix tumor_matrix(const P1Space& space, const FeFunction& u_prev, const FeFunction& sigma_prev,
                          const QuadratureField& c_q, const ModelParams& params, double dt);

// M/dt + D_sigma K + gamma M + W(A_ox u_next / (k_ox + sigma_prev)).
SparseMatrix oxygen_matrix(const P1Space& space, const FeFunction& u_next, const FeFunction& sigma_prev,
                           const ModelParams& params, double dt);

// M sigma_prev / dt + gamma beta M 1 + ((1 - s) S_c u_next, phi_i).
Vector oxygen_rhs(const P1Space& space, const FeFunction& sigma_prev, const FeFunction& u_next,
                  const QuadratureField& s_q, const ModelParams& params, double dt);

// One step of the linear decoupled scheme: u first with lagged coefficients,
// then sigma using the fresh u.
std::pair<FeFunction, FeFunction> step_state(const P1Space& space, const FeFunction& u_prev,
                                             const FeFunction& sigma_prev, const StepControl& control,
                                             const ModelParams& params, double dt, StepSources sources = {});
std::pair<FeFunction, FeFunction> step_state(const P1Space& space, const FeFunction& u_prev,
                                             const FeFunction& sigma_prev, double c, double s,
                                             const ModelParams& params, double dt);

// Throws SteppingError carrying the index of the state being computed.
StateTrajectory run_state(const P1Space& space, const FeFunction& u0, const FeFunction& sigma0,
                          const ControlSchedule& controls, const ModelParams& params);

}  // namespace glio
