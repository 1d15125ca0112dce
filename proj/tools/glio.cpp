// Command-line runner for the tumor-oxygen optimal control experiments.

#include <CLI11.hpp>

#include <atomic>
#include <cstdint>
#include <iostream>
#include <mutex>
#include <set>
#include <thread>

#include "glio/errors.hpp"
#include "glio/experiment.hpp"

namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kInternal = 1, kConfig = 2, kSolver = 3, kIo = 4 };

int classify(const std::exception_ptr& error, std::string& message) {
  try {
    std::rethrow_exception(error);
  } catch (const glio::ConfigError& e) {
    message = std::string("config error: ") + e.what();
    return kConfig;
  } catch (const glio::FormatError& e) {
    message = std::string("format error: ") + e.what();
    return kConfig;
  } catch (const glio::ValidationError& e) {
    message = std::string("invalid mesh: ") + e.what();
    return kConfig;
  } catch (const std::invalid_argument& e) {
    message = std::string("invalid input: ") + e.what();
    return kConfig;
  } catch (const glio::IoError& e) {
    message = std::string("i/o error: ") + e.what();
    return kIo;
  } catch (const glio::OptimizationError& e) {
    message = std::string("optimization failed at ") + e.what();
    return kSolver;
  } catch (const glio::SolverError& e) {
    message = std::string("solver error: ") + e.what();
    return kSolver;
  } catch (const glio::SteppingError& e) {
    message = std::string("solver error: ") + e.what();
    return kSolver;
  } catch (const glio::NumericError& e) {
    message = std::string("numeric error: ") + e.what();
    return kSolver;
  } catch (const fs::filesystem_error& e) {
    message = std::string("i/o error: ") + e.what();
    return kIo;
  } catch (const std::exception& e) {
    message = std::string("internal error: ") + e.what();
    return kInternal;
  }
  return kInternal;
}

struct Options {
  std::vector<std::string> configs;
  std::string out;
  std::size_t stride = 0;  // 0: keep the config value
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  std::string control = "c";
  std::vector<double> perts;
};

struct Job {
  fs::path config_path;
  glio::ExperimentConfig cfg;
  fs::path out_dir;
  int code = kOk;
  std::string log;
};

using Runner = std::function<glio::RunReport(const glio::ExperimentConfig&, const fs::path&)>;

int run_all(const Options& opt, const Runner& runner) {
  std::vector<Job> jobs;
  int code = kOk;
  for (const auto& c : opt.configs) {
    Job job;
    job.config_path = c;
    try {
      job.cfg = glio::load_config(c);
      if (opt.stride) job.cfg.stride = opt.stride;
    } catch (...) {
      std::string msg;
      const int rc = classify(std::current_exception(), msg);
      std::cerr << c << ": " << msg << "\n";
      if (code == kOk) code = rc;
      continue;
    }
    if (!opt.out.empty()) {
      job.out_dir = opt.configs.size() == 1 ? fs::path(opt.out) : fs::path(opt.out) / fs::path(c).stem();
    } else {
      job.out_dir = job.cfg.output_dir;
    }
    jobs.push_back(std::move(job));
  }
  if (code != kOk) return code;

  std::set<fs::path> dirs;
  for (const auto& j : jobs) {
    if (!dirs.insert(fs::weakly_canonical(fs::absolute(j.out_dir))).second) {
      std::cerr << j.config_path.string() << ": output directory " << j.out_dir.string()
                << " is shared with another config\n";
      return kConfig;
    }
  }

  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      Job& j = jobs[i];
      try {
        const auto report = runner(j.cfg, j.out_dir);
        for (const auto& line : report.summary) j.log += "  " + line + "\n";
        j.log += "  wrote " + std::to_string(report.artifacts.size()) + " artifacts to " + j.out_dir.string() + "\n";
      } catch (...) {
        std::string msg;
        j.code = classify(std::current_exception(), msg);
        std::lock_guard lock(err_mutex);
        std::cerr << j.config_path.string() << ": " << msg << "\n";
      }
    }
  };
  const unsigned n_threads = std::max(1u, std::min<unsigned>(opt.jobs, static_cast<unsigned>(jobs.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (const auto& j : jobs) {
    if (j.code == kOk) std::cout << j.config_path.string() << "\n" << j.log;
    if (code == kOk) code = j.code;
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Forward, adjoint and optimal-control runs for a tumor-oxygen chemotaxis model"};
  app.require_subcommand(1);
  Options opt;

  auto common = [&](CLI::App* sub) {
    sub->add_option("config", opt.configs, "Experiment config file(s)")->required();
    sub->add_option("--out", opt.out, "Output directory (one subdirectory per config when several are given)");
    sub->add_option("--stride", opt.stride, "Snapshot stride in time steps")->check(CLI::PositiveNumber);
    sub->add_option("--jobs", opt.jobs, "Configs run concurrently")->check(CLI::PositiveNumber);
  };

  auto* uncontrolled = app.add_subcommand("run-uncontrolled", "Forward solve with c = s = 0");
  common(uncontrolled);
  auto* control = app.add_subcommand("run-control", "Projected Adam optimization and reports");
  common(control);
  auto* probe = app.add_subcommand("probe", "Cost along constant shifts of an optimal control");
  common(probe);
  probe->add_option("--control", opt.control, "Which control to shift")->check(CLI::IsMember({"c", "s"}))->required();
  probe->add_option("--perts", opt.perts, "Comma separated shifts (default: probe.perts)")->delimiter(',');
  auto* check = app.add_subcommand("check-gradient", "Duality and finite-difference checks of the gradient");
  common(check);
  check->add_option("--seed", opt.seed, "Seed for the random directions");
  auto* conv = app.add_subcommand("convergence", "Temporal self-convergence of the coupled scheme");
  common(conv);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfig;
  }

  if (*uncontrolled) return run_all(opt, glio::run_uncontrolled);
  if (*control) return run_all(opt, glio::run_optimal_control);
  if (*probe) {
    const auto which = opt.control == "c" ? glio::ProbeTarget::c : glio::ProbeTarget::s;
    const bool given = !opt.perts.empty();
    return run_all(opt, [&](const glio::ExperimentConfig& cfg, const fs::path& out) {
      return glio::run_probe(cfg, out, which, given ? opt.perts : cfg.perts);
    });
  }
  if (*check) {
    return run_all(opt, [&](const glio::ExperimentConfig& cfg, const fs::path& out) {
      return glio::run_gradient_check(cfg, out, opt.seed);
    });
  }
  return run_all(opt, glio::run_convergence);
}
