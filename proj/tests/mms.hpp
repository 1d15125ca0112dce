#pragma once

// Manufactured oxygen problem shared by the unit and acceptance tests.
//
// With u = 0 the tumor solve returns zero and the oxygen equation reduces to
//   sigma_t - D_sigma lap sigma + gamma (sigma - beta) = f.
// Taking sigma* = beta + g(t) phi(x), phi = cos(pi x) cos(pi y) (zero normal
// derivative on the unit square), the forcing is
//   f = (g' + (2 pi^2 D_sigma + gamma) g) phi.

#include <cmath>
#include <functional>
#include <numbers>

#include "glio/fem.hpp"
#include "glio/model.hpp"
#include "glio/state.hpp"

namespace glio::test {

inline double mms_phi(Vec2 x) { return std::cos(std::numbers::pi * x.x) * std::cos(std::numbers::pi * x.y); }

struct MmsProfile {
  std::function<double(double)> g;
  std::function<double(double)> dg;
};

// L2 error at t = n_steps * dt, measured with the edge-midpoint rule.
inline double oxygen_mms_error(std::size_t nx, double dt, std::size_t n_steps, const MmsProfile& prof,
                               const ModelParams& params = {}) {
  const P1Space space(generate_unit_square(nx, nx));
  const Mesh& mesh = space.mesh();
  const QuadratureField phi_q = sample(mesh, mms_phi);
  const double decay = 2.0 * std::numbers::pi * std::numbers::pi * params.D_sigma + params.gamma;

  auto exact = [&](double t) {
    return [&, t](Vec2 x) { return params.beta + prof.g(t) * mms_phi(x); };
  };
  FeFunction u = Vector::Zero(static_cast<Eigen::Index>(space.size()));
  FeFunction sigma = l2_project(mesh, space.mass(), sample(mesh, exact(0.0)));
  const StepControl control = StepControl::uniform(mesh, 0.0, 0.0);
  for (std::size_t n = 0; n < n_steps; ++n) {
    const double t = static_cast<double>(n + 1) * dt;
    const Vector f = load_vector(mesh, (prof.dg(t) + decay * prof.g(t)) * phi_q);
    auto next = step_state(space, u, sigma, control, params, dt, StepSources{nullptr, &f});
    u = std::move(next.first);
    sigma = std::move(next.second);
  }
  const QuadratureField err = space.at_quadrature(sigma) - sample(mesh, exact(static_cast<double>(n_steps) * dt));
  return std::sqrt(space.integrate(err.cwiseProduct(err)));
}

inline double observed_order(double coarse, double fine, double ratio = 2.0) {
  return std::log(coarse / fine) / std::log(ratio);
}

// Time profile with a strong second derivative so the temporal error dominates.
inline MmsProfile oscillating_profile() {
  const double w = 2.0 * std::numbers::pi;
  return {[w](double t) { return std::sin(w * t); }, [w](double t) { return w * std::cos(w * t); }};
}

// Linear in time: backward Euler is exact, leaving only the spatial error.
inline MmsProfile linear_profile() {
  return {[](double t) { return t; }, [](double) { return 1.0; }};
}

}  // namespace glio::test
