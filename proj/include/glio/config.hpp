#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "glio/control.hpp"
#include "glio/cost_weights.hpp"
#include "glio/grid.hpp"
#include "glio/mesh.hpp"
#include "glio/model.hpp"
#include "glio/optimizer.hpp"

namespace glio {

// Parsed but semantically invalid configuration, or a missing referenced file.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MeshSource {
  enum class Kind { square, node_ele, vtk };
  Kind kind = Kind::square;
  std::size_t nx = 32;
  std::size_t ny = 32;
  std::filesystem::path file;  // resolved against the config file's directory
};

// Flat "key = value" text; '#' starts a comment, blank lines are ignored.
// Lists are comma separated. Every key is optional; see README for the list.
struct ExperimentConfig {
  MeshSource mesh;
  TimeGrid grid;
  InitMode init = InitMode::projection;
  // tumor: Gaussian tumor with two oxygen satellites; equilibrium: u = 0, sigma = beta.
  enum class InitialData { tumor, equilibrium };
  InitialData initial = InitialData::tumor;
  ModelParams params;
  CostWeights weights;
  // omega_area is taken from the mesh when the problem is built.
  AdmissibleSet admissible;
  AdamConfig adam;
  double c0 = 0.5;
  double s0 = 0.5;
  std::vector<double> perts{-0.2, -0.1, -0.05, 0.0, 0.05, 0.1, 0.2};
  std::filesystem::path probe_controls;  // optional controls CSV to probe around
  std::size_t check_directions = 5;
  std::vector<double> check_eps{1e-3, 1e-4, 1e-5};
  std::size_t convergence_levels = 4;
  std::filesystem::path output_dir = "output";
  std::size_t stride = 25;

  // Throws ConfigError.
  void validate() const;
};

// FormatError (with line) for syntax, unknown or repeated keys and
// unparsable values; ConfigError from validate().
ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

// Canonical text with every key; parse_config(to_text(c)) == c.
std::string to_text(const ExperimentConfig& cfg);

}  // namespace glio
