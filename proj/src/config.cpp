#include "glio/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "glio/errors.hpp"
#include "glio/io.hpp"

namespace glio {

namespace {

using Path = std::filesystem::path;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, std::size_t line) {
  if (v.empty()) throw FormatError("empty number", line);
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end != v.c_str() + v.size() || errno == ERANGE) throw FormatError("not a number: '" + v + "'", line);
  return x;
}

std::size_t parse_count(const std::string& v, std::size_t line) {
  if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos) {
    throw FormatError("not a nonnegative integer: '" + v + "'", line);
  }
  errno = 0;
  const auto x = std::strtoull(v.c_str(), nullptr, 10);
  if (errno == ERANGE) throw FormatError("integer out of range: '" + v + "'", line);
  return static_cast<std::size_t>(x);
}

std::vector<double> parse_list(const std::string& v, std::size_t line) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(trim(item), line));
  if (out.empty()) throw FormatError("empty list", line);
  return out;
}

std::string list_text(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_number(v[i]);
  return out;
}

struct Field {
  std::function<void(ExperimentConfig&, const std::string&, std::size_t, const Path&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

using Fields = std::vector<std::pair<std::string, Field>>;

template <class Access>
Field number(Access acc) {
  return {[acc](ExperimentConfig& c, const std::string& v, std::size_t line, const Path&) { acc(c) = parse_double(v, line); },
          [acc](const ExperimentConfig& c) { return format_number(acc(const_cast<ExperimentConfig&>(c))); }};
}

template <class Access>
Field count(Access acc) {
  return {[acc](ExperimentConfig& c, const std::string& v, std::size_t line, const Path&) { acc(c) = parse_count(v, line); },
          [acc](const ExperimentConfig& c) { return std::to_string(acc(const_cast<ExperimentConfig&>(c))); }};
}

template <class Access>
Field list(Access acc) {
  return {[acc](ExperimentConfig& c, const std::string& v, std::size_t line, const Path&) { acc(c) = parse_list(v, line); },
          [acc](const ExperimentConfig& c) { return list_text(acc(const_cast<ExperimentConfig&>(c))); }};
}

#define GLIO_AT(expr) [](ExperimentConfig & c) -> auto& { return c.expr; }

const Fields& fields() {
  static const Fields table = [] {
    Fields f;
    f.emplace_back("mesh", Field{[](ExperimentConfig& c, const std::string& v, std::size_t line, const Path&) {
                                   if (v == "square") c.mesh.kind = MeshSource::Kind::square;
                                   else if (v == "node-ele") c.mesh.kind = MeshSource::Kind::node_ele;
                                   else if (v == "vtk") c.mesh.kind = MeshSource::Kind::vtk;
                                   else throw FormatError("mesh must be square, node-ele or vtk", line);
                                 },
                                 [](const ExperimentConfig& c) -> std::string {
                                   switch (c.mesh.kind) {
                                     case MeshSource::Kind::node_ele: return "node-ele";
                                     case MeshSource::Kind::vtk: return "vtk";
                                     default: return "square";
                                   }
                                 }});
    f.emplace_back("mesh.nx", count(GLIO_AT(mesh.nx)));
    f.emplace_back("mesh.ny", count(GLIO_AT(mesh.ny)));
    f.emplace_back("mesh.file", Field{[](ExperimentConfig& c, const std::string& v, std::size_t, const Path& base_dir) {
                                        c.mesh.file = v.empty() ? Path{} : base_dir / v;
                                      },
                                      [](const ExperimentConfig& c) { return c.mesh.file.string(); }});
    f.emplace_back("time.dt", number(GLIO_AT(grid.dt)));
    f.emplace_back("time.steps", count(GLIO_AT(grid.n_steps)));
    f.emplace_back("init.mode", Field{[](ExperimentConfig& c, const std::string& v, std::size_t line, const Path&) {
                                        if (v == "projection") c.init = InitMode::projection;
                                        else if (v == "interpolation") c.init = InitMode::interpolation;
                                        else throw FormatError("init.mode must be projection or interpolation", line);
                                      },
                                      [](const ExperimentConfig& c) -> std::string {
                                        return c.init == InitMode::projection ? "projection" : "interpolation";
                                      }});
    f.emplace_back("init.data", Field{[](ExperimentConfig& c, const std::string& v, std::size_t line, const Path&) {
                                        using D = ExperimentConfig::InitialData;
                                        if (v == "tumor") c.initial = D::tumor;
                                        else if (v == "equilibrium") c.initial = D::equilibrium;
                                        else throw FormatError("init.data must be tumor or equilibrium", line);
                                      },
                                      [](const ExperimentConfig& c) -> std::string {
                                        return c.initial == ExperimentConfig::InitialData::tumor ? "tumor" : "equilibrium";
                                      }});
    f.emplace_back("model.D_u", number(GLIO_AT(params.D_u)));
    f.emplace_back("model.D_sigma", number(GLIO_AT(params.D_sigma)));
    f.emplace_back("model.alpha", number(GLIO_AT(params.alpha)));
    f.emplace_back("model.rho_hat", number(GLIO_AT(params.rho_hat)));
    f.emplace_back("model.b", number(GLIO_AT(params.b)));
    f.emplace_back("model.chi", number(GLIO_AT(params.chi)));
    f.emplace_back("model.kappa", number(GLIO_AT(params.kappa)));
    f.emplace_back("model.A_ox", number(GLIO_AT(params.A_ox)));
    f.emplace_back("model.k_ox", number(GLIO_AT(params.k_ox)));
    f.emplace_back("model.beta", number(GLIO_AT(params.beta)));
    f.emplace_back("model.gamma", number(GLIO_AT(params.gamma)));
    f.emplace_back("model.S_c", number(GLIO_AT(params.S_c)));
    f.emplace_back("cost.k1", number(GLIO_AT(weights.k1)));
    f.emplace_back("cost.k2", number(GLIO_AT(weights.k2)));
    f.emplace_back("cost.k3", number(GLIO_AT(weights.k3)));
    f.emplace_back("cost.k4", number(GLIO_AT(weights.k4)));
    f.emplace_back("cost.l1", number(GLIO_AT(weights.l1)));
    f.emplace_back("cost.l2", number(GLIO_AT(weights.l2)));
    f.emplace_back("cost.sigma_Q", number(GLIO_AT(weights.sigma_Q)));
    f.emplace_back("cost.sigma_Omega", number(GLIO_AT(weights.sigma_Omega)));
    f.emplace_back("control.c_max", number(GLIO_AT(admissible.c_max)));
    f.emplace_back("control.upper", number(GLIO_AT(admissible.upper)));
    f.emplace_back("control.c0", number(GLIO_AT(c0)));
    f.emplace_back("control.s0", number(GLIO_AT(s0)));
    f.emplace_back("adam.beta1", number(GLIO_AT(adam.beta1)));
    f.emplace_back("adam.beta2", number(GLIO_AT(adam.beta2)));
    f.emplace_back("adam.epsilon", number(GLIO_AT(adam.epsilon)));
    f.emplace_back("adam.alpha0", number(GLIO_AT(adam.alpha0)));
    f.emplace_back("adam.decay", number(GLIO_AT(adam.decay)));
    f.emplace_back("adam.tol", number(GLIO_AT(adam.tol)));
    f.emplace_back("adam.n_stable", count(GLIO_AT(adam.n_stable)));
    f.emplace_back("adam.max_iter", count(GLIO_AT(adam.max_iter)));
    f.emplace_back("probe.perts", list(GLIO_AT(perts)));
    f.emplace_back("probe.controls", Field{[](ExperimentConfig& c, const std::string& v, std::size_t, const Path& base_dir) {
                                             c.probe_controls = v.empty() ? Path{} : base_dir / v;
                                           },
                                           [](const ExperimentConfig& c) { return c.probe_controls.string(); }});
    f.emplace_back("check.directions", count(GLIO_AT(check_directions)));
    f.emplace_back("check.eps", list(GLIO_AT(check_eps)));
    f.emplace_back("convergence.levels", count(GLIO_AT(convergence_levels)));
    f.emplace_back("output.dir", Field{[](ExperimentConfig& c, const std::string& v, std::size_t line, const Path&) {
                                         if (v.empty()) throw FormatError("output.dir must not be empty", line);
                                         c.output_dir = v;
                                       },
                                       [](const ExperimentConfig& c) { return c.output_dir.string(); }});
    f.emplace_back("output.stride", count(GLIO_AT(stride)));
    return f;
  }();
  return table;
}

#undef GLIO_AT

}  // namespace

void ExperimentConfig::validate() const {
  try {
    if (mesh.kind == MeshSource::Kind::square) {
      if (mesh.nx < 1 || mesh.ny < 1) throw std::invalid_argument("mesh.nx and mesh.ny must be at least 1");
    } else {
      if (mesh.file.empty()) throw std::invalid_argument("mesh.file is required for file meshes");
      auto probe = mesh.file;
      if (mesh.kind == MeshSource::Kind::node_ele && !probe.has_extension()) probe += ".node";
      if (!std::filesystem::exists(probe)) throw std::invalid_argument("mesh file not found: " + probe.string());
    }
    grid.validate();
    params.validate();
    weights.validate();
    adam.validate();
    if (!(admissible.c_max > 0.0)) throw std::invalid_argument("control.c_max must be positive");
    if (!(admissible.upper > 0.0)) throw std::invalid_argument("control.upper must be positive");
    if (!std::isfinite(c0) || !std::isfinite(s0)) throw std::invalid_argument("initial controls must be finite");
    for (double p : perts) {
      if (!std::isfinite(p)) throw std::invalid_argument("probe.perts must be finite");
    }
    if (!probe_controls.empty() && !std::filesystem::exists(probe_controls)) {
      throw std::invalid_argument("probe.controls not found: " + probe_controls.string());
    }
    for (double e : check_eps) {
      if (!(e > 0.0)) throw std::invalid_argument("check.eps entries must be positive");
    }
    if (convergence_levels < 2) throw std::invalid_argument("convergence.levels must be at least 2");
    if (stride < 1) throw std::invalid_argument("output.stride must be at least 1");
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  const Fields& table = fields();
  std::map<std::string, const Field*> index;
  for (const auto& [k, f] : table) index[k] = &f;

  ExperimentConfig cfg;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw FormatError("expected 'key = value'", line);
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    const auto it = index.find(key);
    if (it == index.end()) throw FormatError("unknown key '" + key + "'", line);
    if (!seen.insert(key).second) throw FormatError("key '" + key + "' given twice", line);
    it->second->set(cfg, value, line, base_dir);
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text(path);
  } catch (const IoError&) {
    throw ConfigError("cannot read config file " + path.string());
  }
  return parse_config(text, path.parent_path());
}

std::string to_text(const ExperimentConfig& cfg) {
  std::string out;
  for (const auto& [k, f] : fields()) out += k + " = " + f.get(cfg) + "\n";
  return out;
}

}  // namespace glio
