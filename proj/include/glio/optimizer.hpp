#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "glio/control.hpp"
#include "glio/cost.hpp"

namespace glio {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double alpha0 = 0.1;
  // Step size at iteration k is alpha0 * decay^k.
  double decay = 1.0;
  double tol = 1e-6;
  std::size_t n_stable = 5;
  std::size_t max_iter = 200;

  void validate() const;
};

struct AdamState {
  std::vector<double> m_c, v_c, m_s, v_s;
  // Completed (c, s) updates; bias correction uses k + 1.
  std::size_t k = 0;

  static AdamState fresh(std::size_t n);
};

enum class ControlComponent { c, s };

struct AdamDirection {
  std::vector<double> direction;
  AdamState state;
};

// Moment update and bias-corrected direction for one component. The counter
// is left untouched; adam_step advances it once per (c, s) pair.
AdamDirection adam_direction(const AdamState& state, std::span<const double> grad, const AdamConfig& cfg,
                             ControlComponent which);

struct AdamStep {
  std::vector<double> p_c;
  std::vector<double> p_s;
  AdamState state;
};
AdamStep adam_step(const AdamState& state, std::span<const double> grad_c, std::span<const double> grad_s,
                   const AdamConfig& cfg);

struct IterationRecord {
  std::size_t k = 0;
  double cost = 0.0;
  double delta = 0.0;          // |J_k - J_{k-1}|, 0 for k = 0
  double gradient_norm = 0.0;  // time-weighted L2 norm of (d_c, d_s)
  double lambda = 0.0;         // budget multiplier used to produce iterate k
  double budget = 0.0;
  bool stop = false;
  ControlSchedule controls;
};

struct OptimizationResult {
  ControlSchedule best_controls;
  double best_cost = 0.0;
  std::size_t best_iteration = 0;
  bool converged = false;  // stopped by the stabilization rule rather than max_iter
  std::vector<IterationRecord> history;
};

class OptimizationError : public std::runtime_error {
 public:
  OptimizationError(const std::string& what, std::size_t iteration, std::vector<IterationRecord> partial)
      : std::runtime_error("iteration " + std::to_string(iteration) + ": " + what),
        iteration_(iteration),
        history_(std::move(partial)) {}
  std::size_t iteration() const { return iteration_; }
  const std::vector<IterationRecord>& history() const { return history_; }

 private:
  std::size_t iteration_;
  std::vector<IterationRecord> history_;
};

// Projected Adam descent: state, adjoint, gradient, cost, moments, projection,
// repeated until n_stable consecutive |J_k - J_{k-1}| < tol or max_iter.
// Returns the iterate with the smallest cost seen.
OptimizationResult optimize(const ControlProblem& problem, const ControlSchedule& initial, const AdamConfig& cfg);

}  // namespace glio
