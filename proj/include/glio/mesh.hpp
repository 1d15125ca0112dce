#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <vector>

namespace glio {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2 a, Vec2 b) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

using Triangle = std::array<std::size_t, 3>;
using Edge = std::array<std::size_t, 2>;

struct BoundingBox {
  Vec2 min;
  Vec2 max;

  double width() const { return max.x - min.x; }
  double height() const { return max.y - min.y; }
  Vec2 center() const { return 0.5 * (min + max); }
  bool contains(Vec2 p) const { return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y; }
};

struct ElementGeometry {
  double area = 0.0;
  // Constant gradients of the three P1 basis functions on the element.
  std::array<Vec2, 3> grad_basis;
};

// Conforming, counterclockwise-oriented triangulation of a polygonal domain.
// Immutable once constructed; the constructor validates every invariant and
// throws ValidationError otherwise.
class Mesh {
 public:
  Mesh(std::vector<Vec2> vertices, std::vector<Triangle> triangles);

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_triangles() const { return triangles_.size(); }

  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  // Oriented so that the domain lies to the left of each edge.
  const std::vector<Edge>& boundary_edges() const { return boundary_edges_; }
  const BoundingBox& bbox() const { return bbox_; }

  // Sum of element areas.
  double area() const { return area_; }
  // Area enclosed by the boundary edges (shoelace), holes included.
  double polygon_area() const;

  std::array<Vec2, 3> corners(std::size_t e) const;

 private:
  std::vector<Vec2> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<Edge> boundary_edges_;
  BoundingBox bbox_;
  double area_ = 0.0;
};

double signed_area(Vec2 a, Vec2 b, Vec2 c);

ElementGeometry element_geometry(const Mesh& mesh, std::size_t e);

// Structured mesh of [0,1]^2; each cell is split along its lower-left to
// upper-right diagonal.
Mesh generate_unit_square(std::size_t nx, std::size_t ny);

enum class MeshFormat { node_ele, vtk_legacy_ascii };

// For node_ele, path may name the .node file, the .ele file, or the common
// stem; both files must exist. Clockwise triangles are reoriented.
Mesh load_mesh(const std::filesystem::path& path, MeshFormat format);

}  // namespace glio
