#pragma once

#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "glio/fem.hpp"
#include "glio/mesh.hpp"

namespace glio {

// Failure to create, write or read an output artifact.
class IoError : public std::runtime_error {
 public:
  IoError(const std::string& what, const std::filesystem::path& path)
      : std::runtime_error(what + ": " + path.string()), path_(path) {}
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// 17 significant digits ("%.17g"): round-trips exactly and is bitwise stable.
std::string format_number(double v);

// Legacy ASCII VTK, exactly:
//
//   # vtk DataFile Version 3.0
//   <title>
//   ASCII
//   DATASET UNSTRUCTURED_GRID
//   POINTS <V> double
//   <x> <y> 0                      (V lines)
//   CELLS <E> <4E>
//   3 <a> <b> <c>                  (E lines, 0-based)
//   CELL_TYPES <E>
//   5                              (E lines)
//   POINT_DATA <V>
//   SCALARS u double 1
//   LOOKUP_TABLE default
//   <u_i>                          (V lines)
//   SCALARS sigma double 1
//   LOOKUP_TABLE default
//   <sigma_i>                      (V lines)
//
// Numbers use format_number; every line ends in '\n'.
std::string vtk_state_text(const Mesh& mesh, const FeFunction& u, const FeFunction& sigma, const std::string& title);
void write_vtk_state(const std::filesystem::path& path, const Mesh& mesh, const FeFunction& u,
                     const FeFunction& sigma, const std::string& title);

// Comma separated, header first, numbers via format_number.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);

  void add_row(std::span<const double> values);
  void add_row(std::initializer_list<double> values) { add_row(std::span<const double>(values.begin(), values.size())); }

  std::size_t rows() const { return rows_; }
  const std::vector<std::string>& columns() const { return columns_; }
  std::string text() const { return text_; }
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> columns_;
  std::string text_;
  std::size_t rows_ = 0;
};

void write_text(const std::filesystem::path& path, const std::string& content);
std::string read_text(const std::filesystem::path& path);

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

// MANIFEST in dir: a status line then "<sha256>  <relative path>" for every
// listed artifact, sorted by path. Nothing time-dependent goes in.
void write_manifest(const std::filesystem::path& dir, const std::vector<std::filesystem::path>& artifacts,
                    const std::string& status);

struct ManifestEntry {
  std::string hash;
  std::string path;
};
struct Manifest {
  std::string status;
  std::vector<ManifestEntry> entries;
};
Manifest read_manifest(const std::filesystem::path& dir);

}  // namespace glio
