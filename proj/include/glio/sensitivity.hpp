#pragma once

#include <vector>

#include "glio/control.hpp"
#include "glio/fem.hpp"
#include "glio/model.hpp"
#include "glio/state.hpp"

namespace glio {

// Directional derivative of the discrete control-to-state map.
struct SensitivityTrajectory {
  TimeGrid grid;
  std::vector<FeFunction> z1;  // tumor variation, n_steps + 1 entries, z1[0] = 0
  std::vector<FeFunction> z2;  // oxygen variation, n_steps + 1 entries, z2[0] = 0
};

// Forward sweep of the linearized scheme. Obtained by differentiating
// step_state, so it is exact for run_state up to solver tolerance.
SensitivityTrajectory run_sensitivity(const P1Space& space, const StateTrajectory& states,
                                      const ControlSchedule& controls, const ControlDirection& direction,
                                      const ModelParams& params);

}  // namespace glio
