#include "glio/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace glio {

void ModelParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(name) + " must be positive");
  };
  positive(D_u, "D_u");
  positive(D_sigma, "D_sigma");
  positive(alpha, "alpha");
  positive(rho_hat, "rho_hat");
  positive(chi, "chi");
  positive(kappa, "kappa");
  positive(A_ox, "A_ox");
  positive(k_ox, "k_ox");
  positive(beta, "beta");
  positive(gamma, "gamma");
  positive(S_c, "S_c");
  if (!(b >= 0.0 && b <= 1.0)) throw std::invalid_argument("b must lie in [0,1]");
  if (!(alpha >= 1.0)) throw std::invalid_argument("alpha (carrying capacity) must be at least 1");
}

double rho(double sigma, const ModelParams& p) {
  const double r = std::max(sigma, 0.0) / p.beta;
  return p.rho_hat / p.alpha * (r + p.b * (1.0 - r));
}

double rho_prime(double, const ModelParams& p) { return p.rho_hat / p.alpha * (1.0 - p.b) / p.beta; }

double rho_prime_clamped(double sigma, const ModelParams& p) { return sigma < 0.0 ? 0.0 : rho_prime(sigma, p); }

std::array<Vec2, 2> default_satellites(const BoundingBox& box) {
  const Vec2 c = box.center();
  return {Vec2{c.x + 0.25 * box.width(), c.y + 0.10 * box.height()},
          Vec2{c.x - 0.20 * box.width(), c.y - 0.15 * box.height()}};
}

namespace {

double gaussian(Vec2 x, Vec2 center, double width) {
  const Vec2 d = x - center;
  return std::exp(-dot(d, d) / (2.0 * width * width));
}

FeFunction discretize(const Mesh& mesh, const std::function<double(Vec2)>& f, InitMode mode) {
  return mode == InitMode::projection ? l2_project(mesh, f) : interpolate(mesh, f);
}

}  // namespace

double tumor_profile(Vec2 x, const BoundingBox& box) {
  const double l = std::min(box.width(), box.height());
  return 0.6 * gaussian(x, box.center(), 0.1 * l);
}

double oxygen_profile(Vec2 x, const BoundingBox& box, const std::array<Vec2, 2>& satellites, double beta) {
  const double l = std::min(box.width(), box.height());
  return 0.7 * beta * (1.0 - 0.3 * tumor_profile(x, box)) + beta * gaussian(x, satellites[0], 0.08 * l) +
         beta * gaussian(x, satellites[1], 0.025 * l);
}

FeFunction initial_tumor(const Mesh& mesh, InitMode mode) {
  const BoundingBox box = mesh.bbox();
  return discretize(mesh, [&](Vec2 x) { return tumor_profile(x, box); }, mode);
}

FeFunction initial_oxygen(const Mesh& mesh, const std::array<Vec2, 2>& satellites, const ModelParams& params,
                          InitMode mode) {
  const BoundingBox box = mesh.bbox();
  for (const auto& s : satellites) {
    if (!box.contains(s)) throw std::invalid_argument("satellite centre lies outside the mesh bounding box");
  }
  return discretize(mesh, [&](Vec2 x) { return oxygen_profile(x, box, satellites, params.beta); }, mode);
}

FeFunction initial_oxygen(const Mesh& mesh, const ModelParams& params, InitMode mode) {
  return initial_oxygen(mesh, default_satellites(mesh.bbox()), params, mode);
}

}  // namespace glio
