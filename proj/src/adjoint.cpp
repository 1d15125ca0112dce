#include "glio/adjoint.hpp"

#include <optional>
#include <stdexcept>

#include "glio/errors.hpp"

namespace glio {

std::pair<FeFunction, FeFunction> terminal_adjoint(const P1Space& space, const FeFunction& u_T,
                                                   const FeFunction& sigma_T, const CostWeights& weights) {
  const QuadratureField u_q = space.at_quadrature(u_T);
  const QuadratureField s_q = space.at_quadrature(sigma_T);
  FeFunction p1 = space.project(weights.l1 * u_q);
  FeFunction p2 = space.project(weights.l2 * (s_q.array() - weights.sigma_Omega).matrix());
  return {std::move(p1), std::move(p2)};
}

std::pair<FeFunction, FeFunction> step_adjoint_backward(const P1Space& space, const FeFunction& p1_next,
                                                        const FeFunction& p2_next, const StepLinearization& current,
                                                        const StepLinearization* next, const StateTrajectory& states,
                                                        std::size_t j, const CostWeights& weights) {
  const double dt = states.grid.dt;
  const bool last = j + 1 == states.grid.n_steps;
  if (last != (next == nullptr)) throw std::invalid_argument("step_adjoint_backward: next-step linearization mismatch");
  const auto n = static_cast<Eigen::Index>(space.size());

  Vector rhs2 = space.mass() * p2_next / dt +
                weights.k2 * (space.mass() * states.sigma[j + 1] - weights.sigma_Q * space.lumped_ones());
  if (next) rhs2 += next->oxygen_lag * p2_next + next->oxygen_to_tumor * p1_next;
  FeFunction p2 = solve_sparse(current.oxygen, rhs2, SolveHint::spd);
  check_finite(p2, "oxygen adjoint solve");

  Vector rhs1 = space.mass() * p1_next / dt + current.tumor_to_oxygen * p2 + weights.k1 * (space.mass() * states.u[j + 1]);
  if (next) rhs1 -= next->growth_lag * p1_next;
  FeFunction p1 = solve_sparse(current.tumor.transpose(), rhs1, SolveHint::general);
  check_finite(p1, "tumor adjoint solve");

  if (p1.size() != n || p2.size() != n) throw std::logic_error("adjoint size mismatch");
  return {std::move(p1), std::move(p2)};
}

std::pair<FeFunction, FeFunction> step_adjoint_backward(const P1Space& space, const FeFunction& p1_next,
                                                        const FeFunction& p2_next, const StateTrajectory& states,
                                                        std::size_t j, const ControlSchedule& controls,
                                                        const CostWeights& weights, const ModelParams& params) {
  const auto current = linearize_step(space, states, j, controls, params);
  std::optional<StepLinearization> next;
  if (j + 1 < states.grid.n_steps) next = linearize_step(space, states, j + 1, controls, params);
  return step_adjoint_backward(space, p1_next, p2_next, current, next ? &*next : nullptr, states, j, weights);
}

AdjointTrajectory run_adjoint(const P1Space& space, const StateTrajectory& states, const ControlSchedule& controls,
                              const CostWeights& weights, const ModelParams& params) {
  controls.validate();
  const TimeGrid& grid = states.grid;
  if (!(controls.grid == grid)) throw std::invalid_argument("run_adjoint: controls and states use different grids");
  if (states.u.size() != grid.n_steps + 1 || states.sigma.size() != grid.n_steps + 1) {
    throw std::invalid_argument("run_adjoint: incomplete state trajectory");
  }
  const std::size_t n_steps = grid.n_steps;
  AdjointTrajectory out{grid, std::vector<FeFunction>(n_steps + 1), std::vector<FeFunction>(n_steps + 1)};
  std::tie(out.p1[n_steps], out.p2[n_steps]) =
      terminal_adjoint(space, states.u[n_steps], states.sigma[n_steps], weights);

  std::optional<StepLinearization> next;
  for (std::size_t j = n_steps; j-- > 0;) {
    try {
      auto current = linearize_step(space, states, j, controls, params);
      std::tie(out.p1[j], out.p2[j]) = step_adjoint_backward(space, out.p1[j + 1], out.p2[j + 1], current,
                                                             next ? &*next : nullptr, states, j, weights);
      next = std::move(current);
    } catch (const SolverError& e) {
      throw SteppingError(e.what(), j);
    } catch (const NumericError& e) {
      throw SteppingError(e.what(), j);
    }
  }
  return out;
}

}  // namespace glio
