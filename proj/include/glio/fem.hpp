#pragma once

#include <Eigen/Sparse>
#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "glio/mesh.hpp"

namespace glio {

using Vector = Eigen::VectorXd;

// Nodal coefficients of a P1 field; length equals the vertex count of the
// mesh it lives on.
using FeFunction = Vector;

// Values at the three edge-midpoint quadrature points of every element,
// stored element-major: index 3*e + q, where point q is the midpoint of
// local edge (q, q+1 mod 3).
using QuadratureField = Vector;

class SparseMatrix {
 public:
  using Storage = Eigen::SparseMatrix<double, Eigen::RowMajor>;

  SparseMatrix() = default;
  SparseMatrix(Storage m, bool symmetric) : m_(std::move(m)), symmetric_(symmetric) {}

  Eigen::Index rows() const { return m_.rows(); }
  Eigen::Index cols() const { return m_.cols(); }
  bool symmetric() const { return symmetric_; }
  const Storage& eigen() const { return m_; }

  Vector operator*(const Vector& x) const { return m_ * x; }
  SparseMatrix transpose() const { return {Storage(m_.transpose()), symmetric_}; }

  friend SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b) {
    return {Storage(a.m_ + b.m_), a.symmetric_ && b.symmetric_};
  }
  friend SparseMatrix operator-(const SparseMatrix& a, const SparseMatrix& b) {
    return {Storage(a.m_ - b.m_), a.symmetric_ && b.symmetric_};
  }
  friend SparseMatrix operator*(double s, const SparseMatrix& a) { return {Storage(s * a.m_), a.symmetric_}; }

  double coeff(Eigen::Index i, Eigen::Index j) const { return m_.coeff(i, j); }

 private:
  Storage m_;
  bool symmetric_ = false;
};

SparseMatrix assemble_mass(const Mesh& mesh);
SparseMatrix assemble_stiffness(const Mesh& mesh);

// Weight evaluated at (element, quadrature point index, coordinates).
using QuadratureCallback = std::function<double(std::size_t element, int point, Vec2 x)>;

// W_ij = sum_e sum_q (|e|/3) w(x_q) phi_i(x_q) phi_j(x_q).
SparseMatrix assemble_weighted_mass(const Mesh& mesh, const QuadratureCallback& weight);
SparseMatrix assemble_weighted_mass(const Mesh& mesh, const QuadratureField& weight);

// G_ij = sum_e (int_e w) grad phi_i . grad phi_j with the midpoint rule for int_e w.
SparseMatrix assemble_weighted_stiffness(const Mesh& mesh, const QuadratureField& weight);

// C_ij = sum_e sum_q (|e|/3) phi_j(x_q) b_e . grad phi_i, for an element-wise
// constant field b. Row i is the test function.
SparseMatrix assemble_convection(const Mesh& mesh, std::span<const Vec2> field);

// Coordinates of every quadrature point, in QuadratureField order.
std::vector<Vec2> quadrature_points(const Mesh& mesh);

// Interpolates a nodal field to the quadrature points.
QuadratureField at_quadrature(const Mesh& mesh, const FeFunction& f);
QuadratureField sample(const Mesh& mesh, const std::function<double(Vec2)>& f);

// Element-wise constant gradient of a P1 field.
std::vector<Vec2> gradient(const Mesh& mesh, const FeFunction& f);

// b_i = int f phi_i with the 3-point rule.
Vector load_vector(const Mesh& mesh, const QuadratureField& f);
// int f with the 3-point rule.
double integrate(const Mesh& mesh, const QuadratureField& f);

FeFunction interpolate(const Mesh& mesh, const std::function<double(Vec2)>& f);

// L2 projection onto P1: M q = (f, phi_i).
FeFunction l2_project(const Mesh& mesh, const std::function<double(Vec2)>& f);
FeFunction l2_project(const Mesh& mesh, const SparseMatrix& mass, const QuadratureField& f);

enum class SolveHint { spd, general };

struct SolveOptions {
  // Iteration target; the returned solution is only required to meet the
  // 1e-10 relative residual contract.
  double target = 1e-13;
  // 0 means 10 * rows.
  Eigen::Index max_iterations = 0;
};

Vector solve_sparse(const SparseMatrix& a, const Vector& b, SolveHint hint, const SolveOptions& options = {});

// Throws NumericError naming `what` if any entry is NaN or infinite.
void check_finite(const Vector& v, std::string_view what);

// Mesh plus its constant-coefficient matrices, shared by the time steppers.
class P1Space {
 public:
  explicit P1Space(Mesh mesh);

  const Mesh& mesh() const { return mesh_; }
  std::size_t size() const { return mesh_.num_vertices(); }
  const SparseMatrix& mass() const { return mass_; }
  const SparseMatrix& stiffness() const { return stiffness_; }
  // M * 1, i.e. int phi_i.
  const Vector& lumped_ones() const { return mass_ones_; }

  QuadratureField at_quadrature(const FeFunction& f) const { return glio::at_quadrature(mesh_, f); }
  double integrate(const QuadratureField& f) const { return glio::integrate(mesh_, f); }
  FeFunction project(const QuadratureField& f) const { return l2_project(mesh_, mass_, f); }

 private:
  Mesh mesh_;
  SparseMatrix mass_;
  SparseMatrix stiffness_;
  Vector mass_ones_;
};

}  // namespace glio
