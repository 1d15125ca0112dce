#include <doctest.h>

#include <cmath>
#include <random>

#include "glio/errors.hpp"
#include "glio/fem.hpp"
#include "glio/model.hpp"

using namespace glio;

namespace {

Mesh reference_triangle() { return Mesh({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}}); }

// A jittered square mesh so tests do not only see right triangles.
Mesh jittered_square(std::size_t n, unsigned seed) {
  auto base = generate_unit_square(n, n);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> d(-0.2 / static_cast<double>(n), 0.2 / static_cast<double>(n));
  auto v = base.vertices();
  std::vector<Vec2> moved(v.begin(), v.end());
  for (auto& p : moved) {
    if (p.x > 0 && p.x < 1) p.x += d(rng);
    if (p.y > 0 && p.y < 1) p.y += d(rng);
  }
  return Mesh(moved, {base.triangles().begin(), base.triangles().end()});
}

double max_abs_diff(const SparseMatrix& a, const SparseMatrix& b) {
  Eigen::MatrixXd d = Eigen::MatrixXd(a.eigen()) - Eigen::MatrixXd(b.eigen());
  return d.cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("reference element mass and stiffness") {
  auto m = reference_triangle();
  const auto mass = assemble_mass(m);
  const auto stiff = assemble_stiffness(m);
  const double area = 0.5;
  const double mref[3][3] = {{2, 1, 1}, {1, 2, 1}, {1, 1, 2}};
  const double kref[3][3] = {{2, -1, -1}, {-1, 1, 0}, {-1, 0, 1}};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      CHECK(std::abs(mass.coeff(i, j) - area / 12.0 * mref[i][j]) <= 1e-14);
      CHECK(std::abs(stiff.coeff(i, j) - 0.5 * kref[i][j]) <= 1e-14);
    }
  }
  CHECK(mass.symmetric());
  CHECK(stiff.symmetric());
}

TEST_CASE("mass matrix sums to the domain area") {
  for (std::size_t n : {1, 2, 5, 16, 64}) {
    auto m = generate_unit_square(n, n);
    const Vector ones = Vector::Ones(static_cast<Eigen::Index>(m.num_vertices()));
    CHECK(std::abs(ones.dot(assemble_mass(m) * ones) - 1.0) <= 1e-12);
  }
  auto j = jittered_square(9, 4);
  const Vector ones = Vector::Ones(static_cast<Eigen::Index>(j.num_vertices()));
  CHECK(std::abs(ones.dot(assemble_mass(j) * ones) - 1.0) <= 1e-12);
}

TEST_CASE("mass matrix is symmetric positive definite") {
  auto m = jittered_square(6, 1);
  const auto mass = assemble_mass(m);
  CHECK(max_abs_diff(mass, mass.transpose()) <= 1e-15);
  std::mt19937 rng(7);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 100; ++trial) {
    Vector x(static_cast<Eigen::Index>(m.num_vertices()));
    for (auto& v : x) v = g(rng);
    CHECK(x.dot(mass * x) > 0.0);
  }
}

TEST_CASE("stiffness annihilates constants and is positive semidefinite") {
  std::mt19937 rng(11);
  std::normal_distribution<double> g;
  for (const auto& m : {generate_unit_square(8, 5), jittered_square(7, 2)}) {
    const auto k = assemble_stiffness(m);
    const Vector ones = Vector::Ones(static_cast<Eigen::Index>(m.num_vertices()));
    CHECK((k * ones).cwiseAbs().maxCoeff() < 1e-12);
    for (int trial = 0; trial < 100; ++trial) {
      Vector x(static_cast<Eigen::Index>(m.num_vertices()));
      for (auto& v : x) v = g(rng);
      CHECK(x.dot(k * x) >= -1e-12);
    }
  }
}

TEST_CASE("stiffness energy of a linear function equals its gradient norm") {
  // u = 2x - 3y has |grad u|^2 = 13 on the unit square.
  auto m = jittered_square(5, 9);
  const Vector u = interpolate(m, [](Vec2 p) { return 2.0 * p.x - 3.0 * p.y; });
  CHECK(u.dot(assemble_stiffness(m) * u) == doctest::Approx(13.0).epsilon(1e-12));
}

TEST_CASE("weighted mass") {
  auto m = jittered_square(6, 3);
  const auto mass = assemble_mass(m);
  const auto one = assemble_weighted_mass(m, [](std::size_t, int, Vec2) { return 1.0; });
  CHECK(max_abs_diff(one, mass) <= 1e-12);
  const auto three = assemble_weighted_mass(m, [](std::size_t, int, Vec2) { return 3.0; });
  CHECK(max_abs_diff(three, 3.0 * mass) <= 1e-12);
  const auto from_field = assemble_weighted_mass(m, QuadratureField::Constant(3 * m.num_triangles(), 3.0));
  CHECK(max_abs_diff(from_field, three) <= 1e-12);

  auto ref = reference_triangle();
  const auto wx = assemble_weighted_mass(ref, [](std::size_t, int, Vec2 x) { return x.x; });
  CHECK(Eigen::MatrixXd(wx.eigen()).sum() == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  CHECK(max_abs_diff(wx, wx.transpose()) <= 1e-15);
}

TEST_CASE("weighted mass reports non-finite weights") {
  auto m = generate_unit_square(2, 2);
  try {
    assemble_weighted_mass(m, [](std::size_t e, int q, Vec2) { return e == 3 && q == 1 ? NAN : 1.0; });
    FAIL("expected a numeric error");
  } catch (const NumericError& e) {
    const std::string what = e.what();
    CHECK(what.find("element 3") != std::string::npos);
    CHECK(what.find("quadrature point 1") != std::string::npos);
  }
}

TEST_CASE("weighted stiffness with unit weight is the stiffness matrix") {
  auto m = jittered_square(5, 5);
  const auto g = assemble_weighted_stiffness(m, QuadratureField::Ones(3 * m.num_triangles()));
  CHECK(max_abs_diff(g, assemble_stiffness(m)) <= 1e-12);
}

TEST_CASE("convection matrix") {
  auto m = jittered_square(5, 8);
  const std::size_t ne = m.num_triangles();
  const Vector ones = Vector::Ones(static_cast<Eigen::Index>(m.num_vertices()));

  const std::vector<Vec2> zero(ne, Vec2{0, 0});
  CHECK(assemble_convection(m, zero).eigen().norm() == 0.0);

  const Vec2 b{0.7, -1.3};
  const std::vector<Vec2> constant(ne, b);
  const Vector c1 = assemble_convection(m, constant) * ones;
  CHECK(std::abs(c1.sum()) <= 1e-12);
  // (C 1)_i = int b . grad phi_i, element by element.
  Vector expect = Vector::Zero(static_cast<Eigen::Index>(m.num_vertices()));
  for (std::size_t e = 0; e < ne; ++e) {
    const auto geo = element_geometry(m, e);
    for (int i = 0; i < 3; ++i) expect[m.triangles()[e][i]] += geo.area * dot(b, geo.grad_basis[i]);
  }
  CHECK((c1 - expect).cwiseAbs().maxCoeff() <= 1e-12);

  // Reference triangle, b = (1, 0): int lambda_1 d_x phi_i = d_x phi_i / 6.
  auto ref = reference_triangle();
  const auto cref = assemble_convection(ref, std::vector<Vec2>{{1, 0}});
  const double dx[3] = {-1.0, 1.0, 0.0};
  for (int i = 0; i < 3; ++i) CHECK(std::abs(cref.coeff(i, 1) - dx[i] / 6.0) <= 1e-15);

  std::vector<Vec2> bad(ne, b);
  bad[2] = {INFINITY, 0};
  CHECK_THROWS_AS(assemble_convection(m, bad), NumericError);
}

TEST_CASE("convection pairing matches direct element integration") {
  auto m = jittered_square(4, 12);
  std::mt19937 rng(5);
  std::normal_distribution<double> g;
  std::vector<Vec2> w(m.num_triangles());
  for (auto& v : w) v = {g(rng), g(rng)};
  const auto c = assemble_convection(m, w);
  for (int trial = 0; trial < 10; ++trial) {
    Vector a(static_cast<Eigen::Index>(m.num_vertices())), bv(a.size());
    for (auto& v : a) v = g(rng);
    for (auto& v : bv) v = g(rng);
    // int_e b_h (w . grad a_h) = |e| * mean of b at the vertices * (w . grad a_h).
    double direct = 0.0;
    const auto grad_a = gradient(m, a);
    for (std::size_t e = 0; e < m.num_triangles(); ++e) {
      const auto& t = m.triangles()[e];
      const double mean_b = (bv[t[0]] + bv[t[1]] + bv[t[2]]) / 3.0;
      direct += element_geometry(m, e).area * mean_b * dot(w[e], grad_a[e]);
    }
    CHECK(std::abs(a.dot(c * bv) - direct) <= 1e-12 * std::max(1.0, std::abs(direct)));
  }
}

TEST_CASE("quadrature helpers") {
  auto m = jittered_square(6, 21);
  CHECK(integrate(m, sample(m, [](Vec2 p) { return p.x * p.x; })) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  CHECK(integrate(m, sample(m, [](Vec2 p) { return p.x * p.y; })) == doctest::Approx(0.25).epsilon(1e-13));
  const Vector ones = Vector::Ones(static_cast<Eigen::Index>(m.num_vertices()));
  const auto mass = assemble_mass(m);
  CHECK((load_vector(m, QuadratureField::Ones(3 * m.num_triangles())) - mass * ones).cwiseAbs().maxCoeff() <= 1e-14);
  // load_vector(f_h at quadrature) = M f_h for a P1 field, the rule being exact on quadratics.
  const Vector f = interpolate(m, [](Vec2 p) { return std::sin(3 * p.x) + p.y; });
  CHECK((load_vector(m, at_quadrature(m, f)) - mass * f).cwiseAbs().maxCoeff() <= 1e-14);

  const auto grads = gradient(m, interpolate(m, [](Vec2 p) { return 4.0 * p.x - p.y; }));
  for (const auto& gr : grads) {
    CHECK(gr.x == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(gr.y == doctest::Approx(-1.0).epsilon(1e-12));
  }
  const auto pts = quadrature_points(m);
  REQUIRE(pts.size() == 3 * m.num_triangles());
  const auto& t0 = m.triangles()[0];
  const Vec2 mid = 0.5 * (m.vertices()[t0[0]] + m.vertices()[t0[1]]);
  CHECK(pts[0].x == doctest::Approx(mid.x));
  CHECK(pts[0].y == doctest::Approx(mid.y));
}

TEST_CASE("L2 projection reproduces P1 functions") {
  auto m = jittered_square(8, 17);
  const auto one = l2_project(m, [](Vec2) { return 1.0; });
  CHECK((one.array() - 1.0).abs().maxCoeff() <= 1e-10);
  const auto x = l2_project(m, [](Vec2 p) { return p.x; });
  for (std::size_t i = 0; i < m.num_vertices(); ++i) CHECK(std::abs(x[i] - m.vertices()[i].x) <= 1e-10);

  const auto box = m.bbox();
  auto gauss = [&](Vec2 p) { return tumor_profile(p, box); };
  const auto q = l2_project(m, gauss);
  const auto mass = assemble_mass(m);
  CHECK(std::abs((mass * q).sum() - integrate(m, sample(m, gauss))) <= 1e-10);
  const Vector b = load_vector(m, sample(m, gauss));
  CHECK((mass * q - b).norm() <= 1e-10 * b.norm());
}

TEST_CASE("sparse solver contract") {
  auto m = generate_unit_square(10, 10);
  const auto mass = assemble_mass(m);
  const auto k = assemble_stiffness(m);
  const Eigen::Index n = mass.rows();
  const Vector ones = Vector::Ones(n);

  SparseMatrix::Storage id(n, n);
  id.setIdentity();
  const SparseMatrix eye(id, true);
  std::mt19937 rng(2);
  std::normal_distribution<double> g;
  Vector b(n);
  for (auto& v : b) v = g(rng);
  CHECK((solve_sparse(eye, b, SolveHint::spd) - b).norm() <= 1e-12 * b.norm());
  CHECK((solve_sparse(eye, b, SolveHint::general) - b).norm() <= 1e-12 * b.norm());

  CHECK((solve_sparse(mass, mass * ones, SolveHint::spd).array() - 1.0).abs().maxCoeff() <= 1e-10);
  const auto shifted = mass + 0.008 * k;
  CHECK((solve_sparse(shifted, mass * ones, SolveHint::spd).array() - 1.0).abs().maxCoeff() <= 1e-10);
  CHECK((solve_sparse(shifted, mass * ones, SolveHint::general).array() - 1.0).abs().maxCoeff() <= 1e-10);

  CHECK(solve_sparse(mass, Vector::Zero(n), SolveHint::spd).norm() == 0.0);
  CHECK_THROWS_AS(solve_sparse(mass, Vector::Ones(n + 1), SolveHint::spd), std::invalid_argument);

  // A starved iteration cap cannot meet the residual contract.
  SolveOptions starved;
  starved.max_iterations = 1;
  try {
    solve_sparse(shifted, b, SolveHint::spd, starved);
    FAIL("expected a solver error");
  } catch (const SolverError& e) {
    CHECK(e.residual() > 1e-10);
  }
}

TEST_CASE("P1Space caches consistent matrices") {
  P1Space space(generate_unit_square(4, 3));
  CHECK(max_abs_diff(space.mass(), assemble_mass(space.mesh())) == 0.0);
  CHECK(max_abs_diff(space.stiffness(), assemble_stiffness(space.mesh())) == 0.0);
  CHECK(space.lumped_ones().sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(check_finite(Vector::Constant(3, NAN), "probe"), NumericError);
}
