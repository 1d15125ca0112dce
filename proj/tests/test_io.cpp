#include <doctest.h>

#include <cstdlib>
#include <random>

#include "glio/errors.hpp"
#include "glio/io.hpp"
#include "test_util.hpp"

using namespace glio;

TEST_CASE("numbers round-trip through text") {
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(-2.5) == "-2.5");
  CHECK(format_number(0.1) == "0.10000000000000001");
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> mant(-1, 1);
  std::uniform_int_distribution<int> ex(-300, 300);
  for (int i = 0; i < 2000; ++i) {
    const double x = std::ldexp(mant(rng), ex(rng));
    CHECK(std::strtod(format_number(x).c_str(), nullptr) == x);
  }
}

TEST_CASE("vtk state file layout") {
  const Mesh mesh({{0, 0}, {1, 0}, {0, 1}}, {Triangle{0, 1, 2}});
  Vector u(3), s(3);
  u << 0.5, 0.25, 1;
  s << 1, 2, -0.125;
  const std::string expect =
      "# vtk DataFile Version 3.0\n"
      "state t=0\n"
      "ASCII\n"
      "DATASET UNSTRUCTURED_GRID\n"
      "POINTS 3 double\n"
      "0 0 0\n"
      "1 0 0\n"
      "0 1 0\n"
      "CELLS 1 4\n"
      "3 0 1 2\n"
      "CELL_TYPES 1\n"
      "5\n"
      "POINT_DATA 3\n"
      "SCALARS u double 1\n"
      "LOOKUP_TABLE default\n"
      "0.5\n"
      "0.25\n"
      "1\n"
      "SCALARS sigma double 1\n"
      "LOOKUP_TABLE default\n"
      "1\n"
      "2\n"
      "-0.125\n";
  CHECK(vtk_state_text(mesh, u, s, "state t=0") == expect);

  CHECK_THROWS_AS(vtk_state_text(mesh, u, Vector(2), "x"), std::invalid_argument);
  CHECK_THROWS_AS(vtk_state_text(mesh, u, s, "two\nlines"), std::invalid_argument);
}

TEST_CASE("written vtk loads back as the same mesh") {
  const test::ScratchDir dir("vtk");
  for (auto [nx, ny] : {std::pair{1, 1}, std::pair{5, 4}, std::pair{7, 2}}) {
    const Mesh mesh = generate_unit_square(nx, ny);
    const Vector f = Vector::LinSpaced(static_cast<Eigen::Index>(mesh.num_vertices()), -1, 3);
    const auto path = dir.path() / "m.vtk";
    write_vtk_state(path, mesh, f, 2 * f, "round trip");
    const Mesh back = load_mesh(path, MeshFormat::vtk_legacy_ascii);
    CHECK(back.vertices() == mesh.vertices());
    CHECK(back.triangles() == mesh.triangles());
  }
}

TEST_CASE("csv tables") {
  CsvTable t({"t", "value"});
  t.add_row({0.0, 1.5});
  t.add_row({0.25, -3.0});
  CHECK(t.rows() == 2);
  CHECK(t.text() == "t,value\n0,1.5\n0.25,-3\n");
  CHECK_THROWS_AS(t.add_row({1.0}), std::invalid_argument);
  CHECK_THROWS_AS(CsvTable({"a,b"}), std::invalid_argument);
  CHECK_THROWS_AS(CsvTable({}), std::invalid_argument);
}

TEST_CASE("sha256 known vectors") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
        "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

TEST_CASE("manifest lists sorted artifacts with their hashes") {
  const test::ScratchDir dir("manifest");
  write_text(dir.path() / "b.csv", "x\n1\n");
  write_text(dir.path() / "sub/a.vtk", "abc");
  write_manifest(dir.path(), {"b.csv", "sub/a.vtk"}, "ok");
  CHECK(test::read_file(dir.path() / "MANIFEST") ==
        "status: ok\n" + sha256_hex("x\n1\n") +
            "  b.csv\n"
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad  sub/a.vtk\n");
  const Manifest m = read_manifest(dir.path());
  CHECK(m.status == "ok");
  REQUIRE(m.entries.size() == 2);
  CHECK(m.entries[0].path == "b.csv");
  CHECK(m.entries[0].hash == sha256_hex("x\n1\n"));
  CHECK(m.entries[1].path == "sub/a.vtk");
  CHECK(m.entries[1].hash == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");

  write_manifest(dir.path(), {"b.csv"}, "failed: step 3");
  CHECK(read_manifest(dir.path()).status == "failed: step 3");
  CHECK_THROWS_AS(write_manifest(dir.path(), {"missing.csv"}, "ok"), IoError);

  write_text(dir.path() / "MANIFEST", "status: ok\nnot a hash line\n");
  try {
    read_manifest(dir.path());
    FAIL("expected a format error");
  } catch (const FormatError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("unwritable paths raise io errors naming the path") {
  const test::ScratchDir dir("io");
  write_text(dir.path() / "file", "x");
  try {
    write_text(dir.path() / "file" / "below", "y");
    FAIL("expected an io error");
  } catch (const IoError& e) {
    CHECK(e.path() == dir.path() / "file");
  }
  CHECK_THROWS_AS(read_text(dir.path() / "absent"), IoError);
  CHECK(read_text(dir.path() / "file") == "x");
}
