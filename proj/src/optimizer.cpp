#include "glio/optimizer.hpp"

#include <cmath>
#include <limits>

namespace glio {

void AdamConfig::validate() const {
  if (!(beta1 >= 0.0 && beta1 < 1.0)) throw std::invalid_argument("beta1 must lie in [0,1)");
  if (!(beta2 >= 0.0 && beta2 < 1.0)) throw std::invalid_argument("beta2 must lie in [0,1)");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!(alpha0 > 0.0)) throw std::invalid_argument("alpha0 must be positive");
  if (!(decay > 0.0)) throw std::invalid_argument("step decay must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (n_stable < 1) throw std::invalid_argument("n_stable must be at least 1");
}

AdamState AdamState::fresh(std::size_t n) {
  const std::vector<double> z(n, 0.0);
  return {z, z, z, z, 0};
}

AdamDirection adam_direction(const AdamState& state, std::span<const double> grad, const AdamConfig& cfg,
                             ControlComponent which) {
  AdamDirection out{std::vector<double>(grad.size()), state};
  auto& m = which == ControlComponent::c ? out.state.m_c : out.state.m_s;
  auto& v = which == ControlComponent::c ? out.state.v_c : out.state.v_s;
  if (m.size() != grad.size() || v.size() != grad.size()) {
    throw std::invalid_argument("adam_direction: gradient length does not match the moment vectors");
  }
  const double t = static_cast<double>(state.k + 1);
  const double bias1 = 1.0 - std::pow(cfg.beta1, t);
  const double bias2 = 1.0 - std::pow(cfg.beta2, t);
  for (std::size_t n = 0; n < grad.size(); ++n) {
    m[n] = cfg.beta1 * m[n] + (1.0 - cfg.beta1) * grad[n];
    v[n] = cfg.beta2 * v[n] + (1.0 - cfg.beta2) * grad[n] * grad[n];
    const double m_hat = m[n] / bias1;
    const double v_hat = v[n] / bias2;
    out.direction[n] = -m_hat / (std::sqrt(v_hat) + cfg.epsilon);
  }
  return out;
}

AdamStep adam_step(const AdamState& state, std::span<const double> grad_c, std::span<const double> grad_s,
                   const AdamConfig& cfg) {
  auto c = adam_direction(state, grad_c, cfg, ControlComponent::c);
  auto s = adam_direction(c.state, grad_s, cfg, ControlComponent::s);
  s.state.k += 1;
  return {std::move(c.direction), std::move(s.direction), std::move(s.state)};
}

namespace {

double gradient_norm(const ReducedGradient& g, double dt) {
  double sum = 0.0;
  for (std::size_t n = 0; n < g.d_c.size(); ++n) sum += g.d_c[n] * g.d_c[n] + g.d_s[n] * g.d_s[n];
  return std::sqrt(dt * sum);
}

}  // namespace

OptimizationResult optimize(const ControlProblem& problem, const ControlSchedule& initial, const AdamConfig& cfg) {
  cfg.validate();
  problem.validate();
  initial.validate();
  if (!(initial.grid == problem.grid)) throw std::invalid_argument("optimize: initial controls use a different grid");

  const AdmissibleSet& set = problem.admissible;
  const TimeGrid& grid = problem.grid;

  OptimizationResult result;
  auto projected = project(initial, set);
  ControlSchedule controls = std::move(projected.controls);
  double lambda = projected.lambda;
  AdamState adam = AdamState::fresh(grid.n_steps);
  result.best_cost = std::numeric_limits<double>::infinity();

  for (std::size_t k = 0;; ++k) {
    Evaluation eval;
    try {
      eval = evaluate_with_gradient(problem, controls);
    } catch (const std::exception& e) {
      throw OptimizationError(e.what(), k, result.history);
    }

    IterationRecord rec;
    rec.k = k;
    rec.cost = eval.cost;
    rec.delta = k == 0 ? 0.0 : std::abs(eval.cost - result.history.back().cost);
    rec.gradient_norm = gradient_norm(eval.gradient, grid.dt);
    rec.lambda = lambda;
    rec.budget = set.omega_area * evaluate_budget(controls.c, grid);
    rec.controls = controls;

    if (eval.cost < result.best_cost) {
      result.best_cost = eval.cost;
      result.best_controls = controls;
      result.best_iteration = k;
    }

    bool stable = k >= cfg.n_stable && rec.delta < cfg.tol;
    for (std::size_t j = 1; stable && j < cfg.n_stable; ++j) stable = result.history[k - j].delta < cfg.tol;
    rec.stop = stable || k >= cfg.max_iter;
    result.history.push_back(rec);
    if (rec.stop) {
      result.converged = stable;
      break;
    }

    auto step = adam_step(adam, eval.gradient.d_c, eval.gradient.d_s, cfg);
    adam = std::move(step.state);
    const double alpha = cfg.alpha0 * std::pow(cfg.decay, static_cast<double>(k));
    ControlSchedule tentative = controls;
    for (std::size_t n = 0; n < grid.n_steps; ++n) {
      tentative.c[n] += alpha * step.p_c[n];
      tentative.s[n] += alpha * step.p_s[n];
    }
    auto next = project(tentative, set);
    controls = std::move(next.controls);
    lambda = next.lambda;
  }
  return result;
}

}  // namespace glio
