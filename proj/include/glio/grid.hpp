#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace glio {

// Uniform partition of [0, T] with T = n_steps * dt.
struct TimeGrid {
  double dt = 0.008;
  std::size_t n_steps = 250;

  double t_final() const { return static_cast<double>(n_steps) * dt; }
  double time(std::size_t n) const { return static_cast<double>(n) * dt; }

  void validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("time step must be positive");
  }

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;
};

}  // namespace glio
