#include "glio/fem.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "glio/errors.hpp"

namespace glio {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

// phi_i at quadrature point q (midpoint of local edge (q, q+1)).
constexpr double basis_at(int i, int q) { return (i == q || i == (q + 1) % 3) ? 0.5 : 0.0; }

SparseMatrix build(const Mesh& mesh, const Triplets& t, bool symmetric) {
  const auto n = static_cast<Eigen::Index>(mesh.num_vertices());
  SparseMatrix::Storage m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return {std::move(m), symmetric};
}

template <class ElementMatrix>
SparseMatrix assemble(const Mesh& mesh, bool symmetric, ElementMatrix&& element_matrix) {
  Triplets t;
  t.reserve(9 * mesh.num_triangles());
  for (std::size_t e = 0; e < mesh.num_triangles(); ++e) {
    const auto& tri = mesh.triangles()[e];
    const auto local = element_matrix(e);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        t.emplace_back(static_cast<Eigen::Index>(tri[i]), static_cast<Eigen::Index>(tri[j]), local[i][j]);
      }
    }
  }
  return build(mesh, t, symmetric);
}

using Local = std::array<std::array<double, 3>, 3>;

void require_quadrature_size(const Mesh& mesh, const QuadratureField& f) {
  if (static_cast<std::size_t>(f.size()) != 3 * mesh.num_triangles()) {
    throw std::invalid_argument("quadrature field has " + std::to_string(f.size()) + " values, expected " +
                                std::to_string(3 * mesh.num_triangles()));
  }
}

void require_nodal_size(const Mesh& mesh, const Vector& f) {
  if (static_cast<std::size_t>(f.size()) != mesh.num_vertices()) {
    throw std::invalid_argument("nodal field has " + std::to_string(f.size()) + " values, expected " +
                                std::to_string(mesh.num_vertices()));
  }
}

}  // namespace

SparseMatrix assemble_mass(const Mesh& mesh) {
  return assemble(mesh, true, [&](std::size_t e) {
    const double a = element_geometry(mesh, e).area / 12.0;
    Local m;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m[i][j] = (i == j ? 2.0 : 1.0) * a;
    return m;
  });
}

SparseMatrix assemble_stiffness(const Mesh& mesh) {
  return assemble(mesh, true, [&](std::size_t e) {
    const auto g = element_geometry(mesh, e);
    Local k;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) k[i][j] = g.area * dot(g.grad_basis[i], g.grad_basis[j]);
    return k;
  });
}

std::vector<Vec2> quadrature_points(const Mesh& mesh) {
  std::vector<Vec2> pts;
  pts.reserve(3 * mesh.num_triangles());
  for (std::size_t e = 0; e < mesh.num_triangles(); ++e) {
    const auto c = mesh.corners(e);
    for (int q = 0; q < 3; ++q) pts.push_back(0.5 * (c[q] + c[(q + 1) % 3]));
  }
  return pts;
}

SparseMatrix assemble_weighted_mass(const Mesh& mesh, const QuadratureCallback& weight) {
  return assemble(mesh, true, [&](std::size_t e) {
    const double a3 = element_geometry(mesh, e).area / 3.0;
    const auto c = mesh.corners(e);
    Local m{};
    for (int q = 0; q < 3; ++q) {
      const Vec2 x = 0.5 * (c[q] + c[(q + 1) % 3]);
      const double w = weight(e, q, x);
      if (!std::isfinite(w)) {
        std::ostringstream msg;
        msg << "non-finite weight at element " << e << ", quadrature point " << q << " (" << x.x << ", " << x.y
            << ")";
        throw NumericError(msg.str());
      }
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m[i][j] += a3 * w * basis_at(i, q) * basis_at(j, q);
    }
    return m;
  });
}

SparseMatrix assemble_weighted_mass(const Mesh& mesh, const QuadratureField& weight) {
  require_quadrature_size(mesh, weight);
  return assemble_weighted_mass(mesh, [&](std::size_t e, int q, Vec2) { return weight[3 * e + q]; });
}

SparseMatrix assemble_weighted_stiffness(const Mesh& mesh, const QuadratureField& weight) {
  require_quadrature_size(mesh, weight);
  return assemble(mesh, true, [&](std::size_t e) {
    const auto g = element_geometry(mesh, e);
    const double w = weight[3 * e] + weight[3 * e + 1] + weight[3 * e + 2];
    if (!std::isfinite(w)) throw NumericError("non-finite weight at element " + std::to_string(e));
    Local k;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) k[i][j] = g.area / 3.0 * w * dot(g.grad_basis[i], g.grad_basis[j]);
    return k;
  });
}

SparseMatrix assemble_convection(const Mesh& mesh, std::span<const Vec2> field) {
  if (field.size() != mesh.num_triangles()) throw std::invalid_argument("convection field needs one vector per element");
  return assemble(mesh, false, [&](std::size_t e) {
    const auto g = element_geometry(mesh, e);
    const Vec2 b = field[e];
    if (!std::isfinite(b.x) || !std::isfinite(b.y)) {
      throw NumericError("non-finite convection field at element " + std::to_string(e));
    }
    // sum_q phi_j(x_q) = 1 for every j.
    Local c;
    for (int i = 0; i < 3; ++i) {
      const double bi = g.area / 3.0 * dot(b, g.grad_basis[i]);
      for (int j = 0; j < 3; ++j) c[i][j] = bi;
    }
    return c;
  });
}

QuadratureField at_quadrature(const Mesh& mesh, const FeFunction& f) {
  require_nodal_size(mesh, f);
  QuadratureField out(3 * mesh.num_triangles());
  for (std::size_t e = 0; e < mesh.num_triangles(); ++e) {
    const auto& t = mesh.triangles()[e];
    for (int q = 0; q < 3; ++q) out[3 * e + q] = 0.5 * (f[t[q]] + f[t[(q + 1) % 3]]);
  }
  return out;
}

QuadratureField sample(const Mesh& mesh, const std::function<double(Vec2)>& f) {
  const auto pts = quadrature_points(mesh);
  QuadratureField out(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) out[k] = f(pts[k]);
  return out;
}

std::vector<Vec2> gradient(const Mesh& mesh, const FeFunction& f) {
  require_nodal_size(mesh, f);
  std::vector<Vec2> out(mesh.num_triangles());
  for (std::size_t e = 0; e < mesh.num_triangles(); ++e) {
    const auto g = element_geometry(mesh, e);
    const auto& t = mesh.triangles()[e];
    out[e] = f[t[0]] * g.grad_basis[0] + f[t[1]] * g.grad_basis[1] + f[t[2]] * g.grad_basis[2];
  }
  return out;
}

Vector load_vector(const Mesh& mesh, const QuadratureField& f) {
  require_quadrature_size(mesh, f);
  Vector b = Vector::Zero(static_cast<Eigen::Index>(mesh.num_vertices()));
  for (std::size_t e = 0; e < mesh.num_triangles(); ++e) {
    const double a3 = element_geometry(mesh, e).area / 3.0;
    const auto& t = mesh.triangles()[e];
    for (int q = 0; q < 3; ++q) {
      const double v = 0.5 * a3 * f[3 * e + q];
      b[t[q]] += v;
      b[t[(q + 1) % 3]] += v;
    }
  }
  return b;
}

double integrate(const Mesh& mesh, const QuadratureField& f) {
  require_quadrature_size(mesh, f);
  double sum = 0.0;
  for (std::size_t e = 0; e < mesh.num_triangles(); ++e) {
    sum += element_geometry(mesh, e).area / 3.0 * (f[3 * e] + f[3 * e + 1] + f[3 * e + 2]);
  }
  return sum;
}

FeFunction interpolate(const Mesh& mesh, const std::function<double(Vec2)>& f) {
  FeFunction out(static_cast<Eigen::Index>(mesh.num_vertices()));
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) out[v] = f(mesh.vertices()[v]);
  return out;
}

FeFunction l2_project(const Mesh& mesh, const SparseMatrix& mass, const QuadratureField& f) {
  FeFunction q = solve_sparse(mass, load_vector(mesh, f), SolveHint::spd);
  check_finite(q, "L2 projection");
  return q;
}

FeFunction l2_project(const Mesh& mesh, const std::function<double(Vec2)>& f) {
  return l2_project(mesh, assemble_mass(mesh), sample(mesh, f));
}

void check_finite(const Vector& v, std::string_view what) {
  if (!v.allFinite()) throw NumericError(std::string(what) + " produced a non-finite value");
}

Vector solve_sparse(const SparseMatrix& a, const Vector& b, SolveHint hint, const SolveOptions& options) {
  if (a.rows() != a.cols() || a.rows() != b.size()) {
    throw std::invalid_argument("solve_sparse: dimension mismatch (" + std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()) + " with rhs of length " + std::to_string(b.size()) + ")");
  }
  const double bnorm = b.norm();
  if (bnorm == 0.0) return Vector::Zero(b.size());

  const Eigen::Index cap = options.max_iterations > 0 ? options.max_iterations : 10 * a.rows();
  Vector x;
  if (hint == SolveHint::spd) {
    Eigen::ConjugateGradient<SparseMatrix::Storage, Eigen::Lower | Eigen::Upper> cg;
    cg.setMaxIterations(cap);
    cg.setTolerance(options.target);
    cg.compute(a.eigen());
    x = cg.solve(b);
  } else {
    Eigen::BiCGSTAB<SparseMatrix::Storage> bicg;
    bicg.setMaxIterations(cap);
    bicg.setTolerance(options.target);
    bicg.compute(a.eigen());
    x = bicg.solve(b);
  }
  const double residual = (a.eigen() * x - b).norm() / bnorm;
  if (!x.allFinite() || !(residual <= 1e-10)) {
    throw SolverError(hint == SolveHint::spd ? "conjugate gradient did not converge" : "BiCGSTAB did not converge",
                      residual);
  }
  return x;
}

P1Space::P1Space(Mesh mesh)
    : mesh_(std::move(mesh)), mass_(assemble_mass(mesh_)), stiffness_(assemble_stiffness(mesh_)) {
  mass_ones_ = mass_ * Vector::Ones(static_cast<Eigen::Index>(mesh_.num_vertices()));
}

}  // namespace glio
