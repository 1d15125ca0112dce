#pragma once

#include <cmath>
#include <stdexcept>

namespace glio {

// Weights of the tracking-type cost: running terms k1 u^2/2, k2 (sigma -
// sigma_Q)^2/2, k3 c, k4 s and terminal terms l1 u^2/2, l2 (sigma -
// sigma_Omega)^2/2. All spatially constant.
struct CostWeights {
  double k1 = 1.0;
  double k2 = 1.0;
  double k3 = 0.01;
  double k4 = 0.01;
  double l1 = 1.0;
  double l2 = 1.0;
  double sigma_Q = 1.0;
  double sigma_Omega = 1.0;

  void validate() const {
    for (double w : {k1, k2, k3, k4, l1, l2}) {
      if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("cost weights must be nonnegative");
    }
    if (!std::isfinite(sigma_Q) || !std::isfinite(sigma_Omega)) {
      throw std::invalid_argument("desired oxygen levels must be finite");
    }
  }

  static CostWeights zero() { return {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0}; }
};

}  // namespace glio
