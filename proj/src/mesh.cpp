#include "glio/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include "glio/errors.hpp"

namespace glio {

namespace {

std::string pair_name(std::size_t a, std::size_t b) {
  return "triangles " + std::to_string(a) + " and " + std::to_string(b);
}

bool collinear_overlap(Vec2 a0, Vec2 a1, Vec2 b0, Vec2 b1) {
  const Vec2 d = a1 - a0;
  const double len2 = dot(d, d);
  const double tol = 1e-12 * len2;
  if (std::abs(cross(d, b0 - a0)) > tol || std::abs(cross(d, b1 - a0)) > tol) return false;
  double t0 = dot(b0 - a0, d) / len2;
  double t1 = dot(b1 - a0, d) / len2;
  if (t0 > t1) std::swap(t0, t1);
  return std::min(t1, 1.0) - std::max(t0, 0.0) > 1e-12;
}

}  // namespace

double signed_area(Vec2 a, Vec2 b, Vec2 c) { return 0.5 * cross(b - a, c - a); }

Mesh::Mesh(std::vector<Vec2> vertices, std::vector<Triangle> triangles)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
  const std::size_t nv = vertices_.size();
  if (nv < 3 || triangles_.empty()) throw ValidationError("mesh needs at least one triangle");

  std::vector<bool> used(nv, false);
  for (std::size_t e = 0; e < triangles_.size(); ++e) {
    for (std::size_t v : triangles_[e]) {
      if (v >= nv) {
        throw ValidationError("triangle " + std::to_string(e) + " references vertex " + std::to_string(v) +
                              " but the mesh has " + std::to_string(nv) + " vertices");
      }
      used[v] = true;
    }
    const auto& t = triangles_[e];
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
      throw ValidationError("triangle " + std::to_string(e) + " repeats a vertex");
    }
    const double a = signed_area(vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]);
    if (!(a > 0.0)) {
      throw ValidationError("triangle " + std::to_string(e) + " has non-positive signed area");
    }
    area_ += a;
  }
  for (std::size_t v = 0; v < nv; ++v) {
    if (!used[v]) throw ValidationError("vertex " + std::to_string(v) + " belongs to no triangle");
  }

  // Oriented edge (a,b) as traversed by each triangle, keyed by sorted pair.
  struct EdgeUse {
    std::size_t tri;
    Edge oriented;
  };
  std::map<Edge, std::vector<EdgeUse>> edges;
  for (std::size_t e = 0; e < triangles_.size(); ++e) {
    const auto& t = triangles_[e];
    for (int k = 0; k < 3; ++k) {
      const std::size_t a = t[k], b = t[(k + 1) % 3];
      edges[{std::min(a, b), std::max(a, b)}].push_back({e, {a, b}});
    }
  }
  std::map<std::pair<std::size_t, std::size_t>, int> shared;
  for (const auto& [key, uses] : edges) {
    if (uses.size() > 2) {
      throw ValidationError("non-conforming mesh: edge (" + std::to_string(key[0]) + "," + std::to_string(key[1]) +
                            ") is shared by " + pair_name(uses[0].tri, uses[1].tri) + " and more");
    }
    if (uses.size() == 1) {
      boundary_edges_.push_back(uses[0].oriented);
      continue;
    }
    if (uses[0].oriented == uses[1].oriented) {
      throw ValidationError("non-conforming mesh: " + pair_name(uses[0].tri, uses[1].tri) + " overlap across a shared edge");
    }
    auto p = std::minmax(uses[0].tri, uses[1].tri);
    if (++shared[{p.first, p.second}] > 1) {
      throw ValidationError("non-conforming mesh: " + pair_name(p.first, p.second) + " share more than one edge");
    }
  }

  // Hanging vertices show up as boundary edges lying on top of each other.
  std::map<Edge, std::size_t> owner;
  for (const auto& [key, uses] : edges) {
    if (uses.size() == 1) owner[uses[0].oriented] = uses[0].tri;
  }
  for (std::size_t i = 0; i < boundary_edges_.size(); ++i) {
    const auto& ei = boundary_edges_[i];
    for (std::size_t j = i + 1; j < boundary_edges_.size(); ++j) {
      const auto& ej = boundary_edges_[j];
      if (collinear_overlap(vertices_[ei[0]], vertices_[ei[1]], vertices_[ej[0]], vertices_[ej[1]])) {
        throw ValidationError("non-conforming mesh: " + pair_name(owner[ei], owner[ej]) +
                              " meet along a partially shared edge");
      }
    }
  }

  bbox_.min = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  bbox_.max = {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& p : vertices_) {
    bbox_.min = {std::min(bbox_.min.x, p.x), std::min(bbox_.min.y, p.y)};
    bbox_.max = {std::max(bbox_.max.x, p.x), std::max(bbox_.max.y, p.y)};
  }

  const double enclosed = polygon_area();
  if (std::abs(enclosed - area_) > 1e-12 * std::abs(enclosed)) {
    throw ValidationError("non-conforming mesh: element areas sum to " + std::to_string(area_) +
                          " but the boundary encloses " + std::to_string(enclosed));
  }
}

double Mesh::polygon_area() const {
  double twice = 0.0;
  for (const auto& e : boundary_edges_) twice += cross(vertices_[e[0]], vertices_[e[1]]);
  return 0.5 * twice;
}

std::array<Vec2, 3> Mesh::corners(std::size_t e) const {
  const auto& t = triangles_[e];
  return {vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]};
}

ElementGeometry element_geometry(const Mesh& mesh, std::size_t e) {
  if (e >= mesh.num_triangles()) throw std::out_of_range("element index out of range");
  const auto [p0, p1, p2] = mesh.corners(e);
  const double twice = cross(p1 - p0, p2 - p0);
  ElementGeometry g;
  g.area = 0.5 * twice;
  // grad(lambda_i) = rot90(opposite edge) / (2A)
  g.grad_basis[0] = {(p1.y - p2.y) / twice, (p2.x - p1.x) / twice};
  g.grad_basis[1] = {(p2.y - p0.y) / twice, (p0.x - p2.x) / twice};
  g.grad_basis[2] = {(p0.y - p1.y) / twice, (p1.x - p0.x) / twice};
  return g;
}

Mesh generate_unit_square(std::size_t nx, std::size_t ny) {
  if (nx == 0 || ny == 0) throw std::invalid_argument("generate_unit_square: nx and ny must be positive");
  std::vector<Vec2> vertices;
  vertices.reserve((nx + 1) * (ny + 1));
  for (std::size_t j = 0; j <= ny; ++j) {
    for (std::size_t i = 0; i <= nx; ++i) {
      vertices.push_back({static_cast<double>(i) / static_cast<double>(nx),
                          static_cast<double>(j) / static_cast<double>(ny)});
    }
  }
  auto id = [nx](std::size_t i, std::size_t j) { return j * (nx + 1) + i; };
  std::vector<Triangle> triangles;
  triangles.reserve(2 * nx * ny);
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const std::size_t ll = id(i, j), lr = id(i + 1, j), ul = id(i, j + 1), ur = id(i + 1, j + 1);
      triangles.push_back({ll, lr, ur});
      triangles.push_back({ll, ur, ul});
    }
  }
  return Mesh(std::move(vertices), std::move(triangles));
}

namespace {

// Line reader that skips blank lines and '#' comments while tracking line numbers.
class LineReader {
 public:
  explicit LineReader(const std::filesystem::path& path) : in_(path), path_(path) {
    if (!in_) throw FormatError("cannot open " + path.string(), 0);
  }

  bool next(std::istringstream& out) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      out.clear();
      out.str(line);
      return true;
    }
    return false;
  }

  std::istringstream require() {
    std::istringstream s;
    if (!next(s)) fail("unexpected end of file");
    return s;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw FormatError(path_.string() + ": " + what, line_no_);
  }

  std::size_t line() const { return line_no_; }

 private:
  std::ifstream in_;
  std::filesystem::path path_;
  std::size_t line_no_ = 0;
};

void orient(const std::vector<Vec2>& vertices, std::vector<Triangle>& triangles) {
  for (auto& t : triangles) {
    if (t[0] < vertices.size() && t[1] < vertices.size() && t[2] < vertices.size() &&
        signed_area(vertices[t[0]], vertices[t[1]], vertices[t[2]]) < 0.0) {
      std::swap(t[1], t[2]);
    }
  }
}

Mesh load_node_ele(const std::filesystem::path& path) {
  std::filesystem::path stem = path;
  if (stem.extension() == ".node" || stem.extension() == ".ele") stem.replace_extension();
  auto node_path = stem;
  node_path += ".node";
  auto ele_path = stem;
  ele_path += ".ele";

  std::vector<Vec2> vertices;
  {
    LineReader r(node_path);
    auto header = r.require();
    long long count = 0, dim = 0;
    if (!(header >> count >> dim) || count <= 0 || dim != 2) r.fail("expected header 'V 2 0 0'");
    vertices.resize(static_cast<std::size_t>(count));
    std::vector<bool> seen(vertices.size(), false);
    for (long long k = 0; k < count; ++k) {
      auto s = r.require();
      long long index = 0;
      double x = 0, y = 0;
      if (!(s >> index >> x >> y)) r.fail("expected 'index x y'");
      if (index < 1 || index > count) r.fail("vertex index " + std::to_string(index) + " out of range");
      if (seen[index - 1]) r.fail("duplicate vertex index " + std::to_string(index));
      seen[index - 1] = true;
      vertices[index - 1] = {x, y};
    }
  }

  std::vector<Triangle> triangles;
  {
    LineReader r(ele_path);
    auto header = r.require();
    long long count = 0, nodes = 0;
    if (!(header >> count >> nodes) || count <= 0 || nodes != 3) r.fail("expected header 'E 3 0'");
    triangles.resize(static_cast<std::size_t>(count));
    for (long long k = 0; k < count; ++k) {
      auto s = r.require();
      long long index = 0, a = 0, b = 0, c = 0;
      if (!(s >> index >> a >> b >> c)) r.fail("expected 'index v1 v2 v3'");
      if (index < 1 || index > count) r.fail("element index " + std::to_string(index) + " out of range");
      if (a < 1 || b < 1 || c < 1) r.fail("vertex indices are 1-based");
      triangles[index - 1] = {static_cast<std::size_t>(a - 1), static_cast<std::size_t>(b - 1),
                              static_cast<std::size_t>(c - 1)};
    }
  }
  orient(vertices, triangles);
  return Mesh(std::move(vertices), std::move(triangles));
}

// Token stream over a whole file with the line number of the last token.
class Tokens {
 public:
  explicit Tokens(const std::filesystem::path& path) : path_(path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path.string(), 0);
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
      ++no;
      lines_.push_back(line);
      std::istringstream s(line);
      std::string tok;
      while (s >> tok) tokens_.push_back({tok, no});
    }
  }

  bool done() const { return pos_ >= tokens_.size(); }
  const std::string& peek() const { return tokens_[pos_].first; }

  std::string word() {
    if (done()) fail("unexpected end of file");
    last_ = tokens_[pos_].second;
    return tokens_[pos_++].first;
  }

  template <class T>
  T number() {
    std::string w = word();
    std::istringstream s(w);
    T v{};
    if (!(s >> v) || !s.eof()) fail("expected a number, got '" + w + "'");
    return v;
  }

  // Skips every token on lines up to and including `line`.
  void skip_through(std::size_t line) {
    while (!done() && tokens_[pos_].second <= line) ++pos_;
  }
  std::size_t current_line() const { return done() ? lines_.size() : tokens_[pos_].second; }
  std::size_t last_line() const { return last_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw FormatError(path_.string() + ": " + what, done() ? last_ : tokens_[pos_].second);
  }

 private:
  std::filesystem::path path_;
  std::vector<std::string> lines_;
  std::vector<std::pair<std::string, std::size_t>> tokens_;
  std::size_t pos_ = 0;
  std::size_t last_ = 0;
};

Mesh load_vtk(const std::filesystem::path& path) {
  Tokens t(path);
  // Lines 1 and 2 are the version header and a free-text title.
  if (t.done() || t.peek() != "#" || t.current_line() != 1) t.fail("missing '# vtk DataFile' header");
  t.skip_through(2);
  if (t.word() != "ASCII") t.fail("only ASCII legacy files are supported");
  if (t.word() != "DATASET" || t.word() != "UNSTRUCTURED_GRID") t.fail("expected 'DATASET UNSTRUCTURED_GRID'");

  std::vector<Vec2> vertices;
  std::vector<std::vector<std::size_t>> cells;
  std::vector<int> types;
  while (!t.done()) {
    const std::string section = t.word();
    if (section == "POINTS") {
      const auto n = t.number<long long>();
      t.word();  // data type
      if (n <= 0) t.fail("POINTS count must be positive");
      vertices.resize(static_cast<std::size_t>(n));
      for (auto& v : vertices) {
        v.x = t.number<double>();
        v.y = t.number<double>();
        t.number<double>();
      }
    } else if (section == "CELLS") {
      const auto n = t.number<long long>();
      t.number<long long>();
      if (n <= 0) t.fail("CELLS count must be positive");
      cells.resize(static_cast<std::size_t>(n));
      for (auto& c : cells) {
        const auto k = t.number<long long>();
        if (k < 1) t.fail("cell with no points");
        c.resize(static_cast<std::size_t>(k));
        for (auto& idx : c) {
          const auto i = t.number<long long>();
          if (i < 0) t.fail("negative point index");
          idx = static_cast<std::size_t>(i);
        }
      }
    } else if (section == "CELL_TYPES") {
      const auto n = t.number<long long>();
      types.resize(static_cast<std::size_t>(n));
      for (auto& ty : types) ty = t.number<int>();
    } else if (section == "POINT_DATA" || section == "CELL_DATA") {
      break;  // attributes are irrelevant for geometry
    } else {
      t.fail("unsupported section '" + section + "'");
    }
  }
  if (vertices.empty() || cells.empty()) t.fail("missing POINTS or CELLS");
  if (types.size() != cells.size()) t.fail("CELL_TYPES count does not match CELLS");

  std::vector<Triangle> triangles;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (types[i] == 5) {
      if (cells[i].size() != 3) t.fail("triangle cell " + std::to_string(i) + " does not have 3 points");
      triangles.push_back({cells[i][0], cells[i][1], cells[i][2]});
    } else if (types[i] != 1 && types[i] != 3) {
      t.fail("unsupported cell type " + std::to_string(types[i]) + " for cell " + std::to_string(i));
    }
  }
  if (triangles.empty()) t.fail("no triangle cells");
  orient(vertices, triangles);
  return Mesh(std::move(vertices), std::move(triangles));
}

}  // namespace

Mesh load_mesh(const std::filesystem::path& path, MeshFormat format) {
  switch (format) {
    case MeshFormat::node_ele:
      return load_node_ele(path);
    case MeshFormat::vtk_legacy_ascii:
      return load_vtk(path);
  }
  throw std::invalid_argument("unknown mesh format");
}

}  // namespace glio
