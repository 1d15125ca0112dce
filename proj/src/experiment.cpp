#include "glio/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "glio/errors.hpp"

namespace glio {

namespace fs = std::filesystem;

Observables observe(const P1Space& space, const FeFunction& u, const FeFunction& sigma, double sigma_Q) {
  const Vector dev = sigma.array() - sigma_Q;
  return {u.dot(space.mass() * u), u.maxCoeff(), dev.dot(space.mass() * dev), space.lumped_ones().dot(u)};
}

std::vector<Observables> observe(const P1Space& space, const StateTrajectory& states, double sigma_Q) {
  std::vector<Observables> out;
  out.reserve(states.u.size());
  for (std::size_t n = 0; n < states.u.size(); ++n) out.push_back(observe(space, states.u[n], states.sigma[n], sigma_Q));
  return out;
}

Mesh build_mesh(const MeshSource& source) {
  switch (source.kind) {
    case MeshSource::Kind::node_ele:
      return load_mesh(source.file, MeshFormat::node_ele);
    case MeshSource::Kind::vtk:
      return load_mesh(source.file, MeshFormat::vtk_legacy_ascii);
    case MeshSource::Kind::square:
      break;
  }
  return generate_unit_square(source.nx, source.ny);
}

ControlProblem build_problem(const ExperimentConfig& cfg) {
  ControlProblem pr;
  Mesh mesh = build_mesh(cfg.mesh);
  pr.params = cfg.params;
  if (cfg.initial == ExperimentConfig::InitialData::equilibrium) {
    pr.u0 = Vector::Zero(static_cast<Eigen::Index>(mesh.num_vertices()));
    pr.sigma0 = Vector::Constant(static_cast<Eigen::Index>(mesh.num_vertices()), pr.params.beta);
  } else {
    pr.u0 = initial_tumor(mesh, cfg.init);
    pr.sigma0 = initial_oxygen(mesh, pr.params, cfg.init);
  }
  pr.weights = cfg.weights;
  pr.grid = cfg.grid;
  pr.admissible = cfg.admissible;
  pr.admissible.omega_area = mesh.area();
  pr.space = std::make_shared<P1Space>(std::move(mesh));
  try {
    pr.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return pr;
}

ControlSchedule initial_controls(const ExperimentConfig& cfg) { return ControlSchedule::constant(cfg.grid, cfg.c0, cfg.s0); }

std::vector<std::size_t> snapshot_steps(std::size_t n_steps, std::size_t stride) {
  if (stride == 0) throw std::invalid_argument("snapshot stride must be positive");
  std::vector<std::size_t> out;
  for (std::size_t n = 0; n <= n_steps; n += stride) out.push_back(n);
  if (out.back() != n_steps) out.push_back(n_steps);
  return out;
}

namespace {

std::string snapshot_name(std::size_t n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snapshots/state_%06zu.vtk", n);
  return buf;
}

void write_snapshots(const fs::path& out, const P1Space& space, const StateTrajectory& states, std::size_t stride,
                     RunReport& report) {
  for (std::size_t n : snapshot_steps(states.grid.n_steps, stride)) {
    const fs::path rel = snapshot_name(n);
    write_vtk_state(out / rel, space.mesh(), states.u[n], states.sigma[n],
                    "glio state step " + std::to_string(n) + " t=" + format_number(states.grid.time(n)));
    report.artifacts.push_back(rel);
  }
}

void emit(const fs::path& out, const fs::path& rel, const CsvTable& table, RunReport& report) {
  table.write(out / rel);
  report.artifacts.push_back(rel);
}

void emit_config(const fs::path& out, const ExperimentConfig& cfg, RunReport& report) {
  write_text(out / "config.resolved", to_text(cfg));
  report.artifacts.push_back("config.resolved");
}

CsvTable history_table(const std::vector<IterationRecord>& history) {
  CsvTable t({"k", "J", "delta", "lambda", "budget", "gradient_norm", "stop"});
  for (const auto& r : history) {
    t.add_row({static_cast<double>(r.k), r.cost, r.delta, r.lambda, r.budget, r.gradient_norm, r.stop ? 1.0 : 0.0});
  }
  return t;
}

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

}  // namespace

RunReport run_uncontrolled(const ExperimentConfig& cfg, const fs::path& out_dir) {
  const ControlProblem pr = build_problem(cfg);
  const auto states = run_state(*pr.space, pr.u0, pr.sigma0, ControlSchedule::constant(pr.grid, 0, 0), pr.params);
  const auto obs = observe(*pr.space, states, pr.weights.sigma_Q);

  RunReport report;
  emit_config(out_dir, cfg, report);
  CsvTable table({"t", "int_u2", "max_u", "int_sigma_dev2", "volume"});
  for (std::size_t n = 0; n < obs.size(); ++n) {
    table.add_row({pr.grid.time(n), obs[n].int_u2, obs[n].max_u, obs[n].int_sigma_dev2, obs[n].volume});
  }
  emit(out_dir, "observables.csv", table, report);
  write_snapshots(out_dir, *pr.space, states, cfg.stride, report);
  write_manifest(out_dir, report.artifacts, "ok");

  const auto peak = std::max_element(obs.begin(), obs.end(), [](auto& a, auto& b) { return a.max_u < b.max_u; });
  const double t_peak = pr.grid.time(static_cast<std::size_t>(peak - obs.begin()));
  report.summary.push_back(fmt("max u peaks at %.6g (t = %.4g)", peak->max_u, t_peak));
  report.summary.push_back(fmt("int u^2 at T: %.6g, volume at T: %.6g", obs.back().int_u2, obs.back().volume));
  return report;
}

double probe_cost(const ControlProblem& problem, const ControlSchedule& optimum, ProbeTarget which, double pert) {
  ControlSchedule moved = optimum;
  auto& v = which == ProbeTarget::c ? moved.c : moved.s;
  for (double& x : v) x += pert;
  return evaluate_reduced_cost(problem, project(moved, problem.admissible).controls);
}

RunReport run_optimal_control(const ExperimentConfig& cfg, const fs::path& out_dir) {
  const ControlProblem pr = build_problem(cfg);
  RunReport report;
  emit_config(out_dir, cfg, report);

  OptimizationResult res;
  try {
    res = optimize(pr, initial_controls(cfg), cfg.adam);
  } catch (const OptimizationError& e) {
    emit(out_dir, "history.csv", history_table(e.history()), report);
    write_manifest(out_dir, report.artifacts, std::string("failed: ") + e.what());
    throw;
  }
  emit(out_dir, "history.csv", history_table(res.history), report);

  const ControlSchedule& start = res.history.front().controls;
  const ControlSchedule& best = res.best_controls;
  CsvTable controls({"t", "c_initial", "c_optimal", "s_initial", "s_optimal"});
  for (std::size_t j = 0; j < pr.grid.n_steps; ++j) {
    controls.add_row({pr.grid.time(j), start.c[j], best.c[j], start.s[j], best.s[j]});
  }
  emit(out_dir, "controls.csv", controls, report);

  const auto off = run_state(*pr.space, pr.u0, pr.sigma0, ControlSchedule::constant(pr.grid, 0, 0), pr.params);
  const auto on = run_state(*pr.space, pr.u0, pr.sigma0, best, pr.params);
  const auto obs_off = observe(*pr.space, off, pr.weights.sigma_Q);
  const auto obs_on = observe(*pr.space, on, pr.weights.sigma_Q);
  CsvTable comparison({"t", "int_u2_uncontrolled", "max_u_uncontrolled", "int_sigma_dev2_uncontrolled",
                       "volume_uncontrolled", "int_u2_optimal", "max_u_optimal", "int_sigma_dev2_optimal",
                       "volume_optimal"});
  for (std::size_t n = 0; n <= pr.grid.n_steps; ++n) {
    const auto& a = obs_off[n];
    const auto& b = obs_on[n];
    comparison.add_row({pr.grid.time(n), a.int_u2, a.max_u, a.int_sigma_dev2, a.volume, b.int_u2, b.max_u,
                        b.int_sigma_dev2, b.volume});
  }
  emit(out_dir, "comparison.csv", comparison, report);

  CsvTable probe({"pert", "J_c", "J_s"});
  for (double p : cfg.perts) probe.add_row({p, probe_cost(pr, best, ProbeTarget::c, p), probe_cost(pr, best, ProbeTarget::s, p)});
  emit(out_dir, "perturbation.csv", probe, report);

  write_snapshots(out_dir, *pr.space, on, cfg.stride, report);
  write_manifest(out_dir, report.artifacts, "ok");

  const auto& last = res.history.back();
  report.summary.push_back(fmt("initial J %.10g, best J %.10g", res.history.front().cost, res.best_cost));
  report.summary.push_back("best iterate " + std::to_string(res.best_iteration) + " of " +
                           std::to_string(last.k) + (res.converged ? " (stabilized)" : " (max_iter)"));
  report.summary.push_back(fmt("budget of best controls %.12g (c_max %.6g)",
                               pr.admissible.omega_area * evaluate_budget(best.c, pr.grid), pr.admissible.c_max));
  return report;
}

ControlSchedule read_controls_csv(const fs::path& path, const TimeGrid& grid) {
  std::istringstream in(read_text(path));
  std::string line;
  if (!std::getline(in, line)) throw FormatError("controls file is empty: " + path.string(), 1);
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, ',')) header.push_back(col);
  }
  auto column = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw FormatError("controls file lacks column " + name + ": " + path.string(), 1);
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t ic = column("c_optimal");
  const std::size_t is = column("s_optimal");

  ControlSchedule out{grid, {}, {}};
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      char* end = nullptr;
      row.push_back(std::strtod(cell.c_str(), &end));
      if (end == cell.c_str() || *end != '\0') throw FormatError("bad number '" + cell + "' in " + path.string(), n);
    }
    if (row.size() != header.size()) throw FormatError("wrong field count in " + path.string(), n);
    out.c.push_back(row[ic]);
    out.s.push_back(row[is]);
  }
  if (out.c.size() != grid.n_steps) {
    throw FormatError("controls file has " + std::to_string(out.c.size()) + " rows, the time grid needs " +
                          std::to_string(grid.n_steps),
                      0);
  }
  return out;
}

RunReport run_probe(const ExperimentConfig& cfg, const fs::path& out_dir, ProbeTarget which,
                    const std::vector<double>& perts) {
  const ControlProblem pr = build_problem(cfg);
  RunReport report;
  emit_config(out_dir, cfg, report);

  ControlSchedule center;
  if (!cfg.probe_controls.empty()) {
    center = project(read_controls_csv(cfg.probe_controls, pr.grid), pr.admissible).controls;
  } else {
    center = optimize(pr, initial_controls(cfg), cfg.adam).best_controls;
  }
  const char* name = which == ProbeTarget::c ? "c" : "s";
  CsvTable table({"pert", "J"});
  std::size_t arg = 0;
  double lowest = INFINITY;
  for (std::size_t i = 0; i < perts.size(); ++i) {
    const double j = probe_cost(pr, center, which, perts[i]);
    table.add_row({perts[i], j});
    if (j < lowest) {
      lowest = j;
      arg = i;
    }
  }
  emit(out_dir, std::string("probe_") + name + ".csv", table, report);
  write_manifest(out_dir, report.artifacts, "ok");
  if (!perts.empty()) report.summary.push_back(fmt("lowest J %.10g at pert %.6g", lowest, perts[arg]));
  return report;
}

RunReport run_gradient_check(const ExperimentConfig& cfg, const fs::path& out_dir, std::uint64_t seed) {
  const ControlProblem pr = build_problem(cfg);
  const ControlSchedule base = project(initial_controls(cfg), pr.admissible).controls;
  const Evaluation eval = evaluate_with_gradient(pr, base);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  CsvTable duality({"direction", "sensitivity_side", "adjoint_side", "relative_gap"});
  CsvTable fd({"direction", "eps", "finite_difference", "adjoint", "relative_error"});
  double worst_gap = 0.0, worst_fd = 0.0;
  for (std::size_t d = 0; d < cfg.check_directions; ++d) {
    auto dir = ControlDirection::zero(pr.grid.n_steps);
    for (std::size_t n = 0; n < pr.grid.n_steps; ++n) {
      dir.dc[n] = unit(rng);
      dir.ds[n] = unit(rng);
    }
    const auto sens = run_sensitivity(*pr.space, eval.states, base, dir, pr.params);
    const auto dual = duality_identity(*pr.space, eval.states, eval.adjoints, sens, dir, pr.weights, pr.params);
    const double gap = std::abs(dual.sensitivity_side - dual.adjoint_side) /
                       std::max(std::abs(dual.sensitivity_side), std::abs(dual.adjoint_side));
    duality.add_row({static_cast<double>(d), dual.sensitivity_side, dual.adjoint_side, gap});
    worst_gap = std::max(worst_gap, gap);

    const double exact = directional_derivative(eval.gradient, dir, pr.grid);
    for (double eps : cfg.check_eps) {
      const double approx = fd_gradient_oracle(pr, base, dir, eps);
      const double err = std::abs(approx - exact) / std::max(std::abs(approx), std::abs(exact));
      fd.add_row({static_cast<double>(d), eps, approx, exact, err});
      if (eps == cfg.check_eps.back()) worst_fd = std::max(worst_fd, err);
    }
  }
  RunReport report;
  emit_config(out_dir, cfg, report);
  emit(out_dir, "duality.csv", duality, report);
  emit(out_dir, "gradient_fd.csv", fd, report);
  write_manifest(out_dir, report.artifacts, "ok");
  report.summary.push_back(fmt("largest duality gap %.3e", worst_gap));
  report.summary.push_back(fmt("largest finite-difference error %.3e at eps %.1e", worst_fd,
                               cfg.check_eps.empty() ? 0.0 : cfg.check_eps.back()));
  return report;
}

RunReport run_convergence(const ExperimentConfig& cfg, const fs::path& out_dir) {
  const ControlProblem pr = build_problem(cfg);
  std::vector<TimeGrid> grids;
  std::vector<StateTrajectory> finals;
  for (std::size_t level = 0; level < cfg.convergence_levels; ++level) {
    const double scale = std::ldexp(1.0, static_cast<int>(level));
    const TimeGrid g{cfg.grid.dt / scale, cfg.grid.n_steps << level};
    const auto ctl = project(ControlSchedule::constant(g, cfg.c0, cfg.s0), pr.admissible).controls;
    grids.push_back(g);
    finals.push_back(run_state(*pr.space, pr.u0, pr.sigma0, ctl, pr.params));
  }
  const SparseMatrix& m = pr.space->mass();
  std::vector<double> diff;
  for (std::size_t k = 0; k + 1 < finals.size(); ++k) {
    const Vector du = finals[k].u.back() - finals[k + 1].u.back();
    const Vector ds = finals[k].sigma.back() - finals[k + 1].sigma.back();
    diff.push_back(std::sqrt(du.dot(m * du) + ds.dot(m * ds)));
  }
  CsvTable table({"dt", "steps", "difference", "order"});
  RunReport report;
  for (std::size_t k = 0; k < diff.size(); ++k) {
    const double order = k + 1 < diff.size() ? std::log2(diff[k] / diff[k + 1]) : NAN;
    table.add_row({grids[k].dt, static_cast<double>(grids[k].n_steps), diff[k], order});
    if (k + 1 < diff.size()) report.summary.push_back(fmt("dt %.4g: observed order %.3f", grids[k].dt, order));
  }
  emit_config(out_dir, cfg, report);
  emit(out_dir, "convergence.csv", table, report);
  write_manifest(out_dir, report.artifacts, "ok");
  return report;
}

}  // namespace glio
