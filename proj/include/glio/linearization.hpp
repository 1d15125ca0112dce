#pragma once

#include <cstddef>

#include "glio/control.hpp"
#include "glio/fem.hpp"
#include "glio/model.hpp"
#include "glio/state.hpp"

namespace glio {

// Derivative of step j of the state scheme, (U^j, S^j) -> (U^{j+1}, S^{j+1}),
// around a stored trajectory. With z, w the tumor and oxygen variations the
// linearized step reads
//
//   tumor  z' = M z/dt - growth_lag z + oxygen_to_tumor w - kappa dc chemo_source
//   oxygen w' = M w/dt + oxygen_lag w + tumor_to_oxygen z' - S_c ds angio_source
//
// Every matrix except `tumor` is symmetric, which the adjoint sweep uses.
struct StepLinearization {
  SparseMatrix tumor;            // A_j, the implicit tumor operator
  SparseMatrix oxygen;           // B_j, the implicit oxygen operator
  SparseMatrix growth_lag;       // W(rho(S^j) U^{j+1})
  SparseMatrix oxygen_to_tumor;  // W(rho'(S^j)(alpha - U^j) U^{j+1} - kappa c_j U^{j+1}) + chi G(U^{j+1})
  SparseMatrix tumor_to_oxygen;  // W((1 - s_j) S_c - A_ox S^{j+1}/(k_ox + S^j))
  SparseMatrix oxygen_lag;       // W(A_ox U^{j+1} S^{j+1}/(k_ox + S^j)^2)
  Vector chemo_source;           // (S^j U^{j+1}, phi_i)
  Vector angio_source;           // (U^{j+1}, phi_i)
};

StepLinearization linearize_step(const P1Space& space, const StateTrajectory& states, std::size_t j,
                                 const ControlSchedule& controls, const ModelParams& params);

}  // namespace glio
