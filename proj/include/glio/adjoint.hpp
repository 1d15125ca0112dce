#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "glio/control.hpp"
#include "glio/cost_weights.hpp"
#include "glio/fem.hpp"
#include "glio/linearization.hpp"
#include "glio/model.hpp"
#include "glio/state.hpp"

namespace glio {

// Discrete adjoint state. Entry j < N is the multiplier of state step j
// (t_j -> t_{j+1}), scaled by 1/dt so it approximates the continuous adjoint;
// entry N holds the terminal data.
struct AdjointTrajectory {
  TimeGrid grid;
  std::vector<FeFunction> p1;
  std::vector<FeFunction> p2;
};

// (Q^h(l1 u_T), Q^h(l2 (sigma_T - sigma_Omega))).
std::pair<FeFunction, FeFunction> terminal_adjoint(const P1Space& space, const FeFunction& u_T,
                                                   const FeFunction& sigma_T, const CostWeights& weights);

// One backward step: computes entry j from entry j+1. Oxygen first (it only
// sees entry j+1), then tumor using the fresh oxygen adjoint. `next` is the
// linearization of step j+1 and must be null exactly when j = N-1.
std::pair<FeFunction, FeFunction> step_adjoint_backward(const P1Space& space, const FeFunction& p1_next,
                                                        const FeFunction& p2_next, const StepLinearization& current,
                                                        const StepLinearization* next, const StateTrajectory& states,
                                                        std::size_t j, const CostWeights& weights);

// Convenience overload that linearizes steps j and j+1 itself.
std::pair<FeFunction, FeFunction> step_adjoint_backward(const P1Space& space, const FeFunction& p1_next,
                                                        const FeFunction& p2_next, const StateTrajectory& states,
                                                        std::size_t j, const ControlSchedule& controls,
                                                        const CostWeights& weights, const ModelParams& params);

AdjointTrajectory run_adjoint(const P1Space& space, const StateTrajectory& states, const ControlSchedule& controls,
                              const CostWeights& weights, const ModelParams& params);

}  // namespace glio
