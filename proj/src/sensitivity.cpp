#include "glio/sensitivity.hpp"

#include <stdexcept>

#include "glio/errors.hpp"
#include "glio/linearization.hpp"

namespace glio {

SensitivityTrajectory run_sensitivity(const P1Space& space, const StateTrajectory& states,
                                      const ControlSchedule& controls, const ControlDirection& direction,
                                      const ModelParams& params) {
  controls.validate();
  const TimeGrid& grid = states.grid;
  if (!(controls.grid == grid)) throw std::invalid_argument("run_sensitivity: controls and states use different grids");
  if (direction.dc.size() != grid.n_steps || direction.ds.size() != grid.n_steps) {
    throw std::invalid_argument("run_sensitivity: direction length does not match the grid");
  }
  const Vector zero = Vector::Zero(static_cast<Eigen::Index>(space.size()));
  SensitivityTrajectory out{grid, {zero}, {zero}};
  for (std::size_t j = 0; j < grid.n_steps; ++j) {
    try {
      const auto lin = linearize_step(space, states, j, controls, params);
      const FeFunction& z = out.z1.back();
      const FeFunction& w = out.z2.back();

      Vector rhs_z = space.mass() * z / grid.dt - lin.growth_lag * z + lin.oxygen_to_tumor * w -
                     params.kappa * direction.dc[j] * lin.chemo_source;
      FeFunction z_next = solve_sparse(lin.tumor, rhs_z, SolveHint::general);
      check_finite(z_next, "tumor sensitivity solve");

      Vector rhs_w = space.mass() * w / grid.dt + lin.oxygen_lag * w + lin.tumor_to_oxygen * z_next -
                     params.S_c * direction.ds[j] * lin.angio_source;
      FeFunction w_next = solve_sparse(lin.oxygen, rhs_w, SolveHint::spd);
      check_finite(w_next, "oxygen sensitivity solve");

      out.z1.push_back(std::move(z_next));
      out.z2.push_back(std::move(w_next));
    } catch (const SolverError& e) {
      throw SteppingError(e.what(), j + 1);
    } catch (const NumericError& e) {
      throw SteppingError(e.what(), j + 1);
    }
  }
  return out;
}

}  // namespace glio
