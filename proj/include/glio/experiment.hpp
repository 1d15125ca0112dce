#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "glio/config.hpp"
#include "glio/cost.hpp"
#include "glio/io.hpp"
#include "glio/optimizer.hpp"

namespace glio {

struct Observables {
  double int_u2 = 0.0;          // (u, u)
  double max_u = 0.0;           // nodal maximum
  double int_sigma_dev2 = 0.0;  // (sigma - sigma_Q, sigma - sigma_Q)
  double volume = 0.0;          // (u, 1)
};

Observables observe(const P1Space& space, const FeFunction& u, const FeFunction& sigma, double sigma_Q);
std::vector<Observables> observe(const P1Space& space, const StateTrajectory& states, double sigma_Q);

Mesh build_mesh(const MeshSource& source);
// Mesh, initial data and weights from the config; the budget weight is the
// mesh area.
ControlProblem build_problem(const ExperimentConfig& cfg);
ControlSchedule initial_controls(const ExperimentConfig& cfg);

// Step indices that get a snapshot: 0, stride, 2 stride, ... and always N.
std::vector<std::size_t> snapshot_steps(std::size_t n_steps, std::size_t stride);

// Every runner writes into out_dir, finishes with a MANIFEST, and returns
// the artifact paths relative to out_dir.
struct RunReport {
  std::vector<std::filesystem::path> artifacts;
  std::vector<std::string> summary;  // human-readable lines for stdout
};

// observables.csv (t, int_u2, max_u, int_sigma_dev2, volume), snapshots/.
RunReport run_uncontrolled(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

// controls.csv, history.csv, comparison.csv, perturbation.csv, snapshots/
// of the optimal trajectory. On an optimization failure the partial history
// and a MANIFEST with a "failed" status are written before rethrowing.
RunReport run_optimal_control(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

// J(Proj(c* + pert), s*) or J(c*, clamp(s* + pert)).
enum class ProbeTarget { c, s };
double probe_cost(const ControlProblem& problem, const ControlSchedule& optimum, ProbeTarget which, double pert);

// Probes around the controls in cfg.probe_controls, or around a fresh
// optimum when none is given. Writes probe_c.csv or probe_s.csv.
RunReport run_probe(const ExperimentConfig& cfg, const std::filesystem::path& out_dir, ProbeTarget which,
                    const std::vector<double>& perts);

// c_optimal and s_optimal columns of a controls.csv written by run_optimal_control.
ControlSchedule read_controls_csv(const std::filesystem::path& path, const TimeGrid& grid);

// Duality and finite-difference checks along seeded random directions at
// the projected initial controls: duality.csv, gradient_fd.csv.
RunReport run_gradient_check(const ExperimentConfig& cfg, const std::filesystem::path& out_dir, std::uint64_t seed);

// Temporal self-convergence of the coupled scheme at fixed T: dt, dt/2, ...
// convergence.csv (dt, steps, difference to next level, observed order).
RunReport run_convergence(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace glio
