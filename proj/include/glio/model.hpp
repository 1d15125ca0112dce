#pragma once

#include <array>

#include "glio/fem.hpp"

namespace glio {

// Coefficients of the tumor-oxygen system. Defaults are the reference
// parameter set used by the experiments.
struct ModelParams {
  double D_u = 2.0;        // tumor diffusivity
  double D_sigma = 0.02;   // oxygen diffusivity
  double alpha = 4.0;      // carrying capacity
  double rho_hat = 3.5;    // max proliferation rate under normoxia
  double b = 1.0;          // hypoxia modulation, in [0,1]
  double chi = 10.0;       // oxytaxis sensitivity
  double kappa = 1.0;      // cytotoxic intensity
  double A_ox = 0.6;       // consumption rate
  double k_ox = 0.1;       // Michaelis constant
  double beta = 1.0;       // vascular oxygen level
  double gamma = 1.0;      // permeability times vascular density
  double S_c = 0.4;        // angiogenic supply rate

  // Throws std::invalid_argument on a violated invariant.
  void validate() const;
};

// Growth rate (rho_hat/alpha)(s/beta + b(1 - s/beta)); negative s is clamped to 0.
double rho(double sigma, const ModelParams& p);

// d rho / d sigma for sigma > 0; the prototype is affine so this is constant.
double rho_prime(double sigma, const ModelParams& p);

// One-sided derivative consistent with the clamp in rho: zero for sigma < 0.
double rho_prime_clamped(double sigma, const ModelParams& p);

enum class InitMode { projection, interpolation };

std::array<Vec2, 2> default_satellites(const BoundingBox& box);

// Pointwise initial profiles on a domain with bounding box `box`.
double tumor_profile(Vec2 x, const BoundingBox& box);
double oxygen_profile(Vec2 x, const BoundingBox& box, const std::array<Vec2, 2>& satellites, double beta);

FeFunction initial_tumor(const Mesh& mesh, InitMode mode = InitMode::projection);
FeFunction initial_oxygen(const Mesh& mesh, const std::array<Vec2, 2>& satellites, const ModelParams& params,
                          InitMode mode = InitMode::projection);
FeFunction initial_oxygen(const Mesh& mesh, const ModelParams& params, InitMode mode = InitMode::projection);

}  // namespace glio
