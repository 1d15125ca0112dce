#include "glio/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "glio/errors.hpp"

namespace glio {

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string vtk_state_text(const Mesh& mesh, const FeFunction& u, const FeFunction& sigma, const std::string& title) {
  const auto nv = mesh.num_vertices();
  const auto ne = mesh.num_triangles();
  if (static_cast<std::size_t>(u.size()) != nv || static_cast<std::size_t>(sigma.size()) != nv) {
    throw std::invalid_argument("vtk: field length does not match the mesh");
  }
  if (title.find('\n') != std::string::npos) throw std::invalid_argument("vtk: title must be a single line");

  std::string out;
  out.reserve(64 * (nv + ne));
  out += "# vtk DataFile Version 3.0\n";
  out += title + "\n";
  out += "ASCII\nDATASET UNSTRUCTURED_GRID\n";
  out += "POINTS " + std::to_string(nv) + " double\n";
  for (const auto& p : mesh.vertices()) out += format_number(p.x) + " " + format_number(p.y) + " 0\n";
  out += "CELLS " + std::to_string(ne) + " " + std::to_string(4 * ne) + "\n";
  for (const auto& t : mesh.triangles()) {
    out += "3 " + std::to_string(t[0]) + " " + std::to_string(t[1]) + " " + std::to_string(t[2]) + "\n";
  }
  out += "CELL_TYPES " + std::to_string(ne) + "\n";
  for (std::size_t e = 0; e < ne; ++e) out += "5\n";
  out += "POINT_DATA " + std::to_string(nv) + "\n";
  auto scalars = [&](const char* name, const FeFunction& f) {
    out += std::string("SCALARS ") + name + " double 1\nLOOKUP_TABLE default\n";
    for (Eigen::Index i = 0; i < f.size(); ++i) out += format_number(f[i]) + "\n";
  };
  scalars("u", u);
  scalars("sigma", sigma);
  return out;
}

void write_vtk_state(const std::filesystem::path& path, const Mesh& mesh, const FeFunction& u,
                     const FeFunction& sigma, const std::string& title) {
  write_text(path, vtk_state_text(mesh, u, sigma, title));
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {
  if (columns_.empty()) throw std::invalid_argument("csv: no columns");
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].find_first_of(",\n\"") != std::string::npos) {
      throw std::invalid_argument("csv: column name '" + columns_[i] + "' needs quoting");
    }
    text_ += (i ? "," : "") + columns_[i];
  }
  text_ += "\n";
}

void CsvTable::add_row(std::span<const double> values) {
  if (values.size() != columns_.size()) {
    throw std::invalid_argument("csv: row has " + std::to_string(values.size()) + " values, expected " +
                                std::to_string(columns_.size()));
  }
  for (std::size_t i = 0; i < values.size(); ++i) text_ += (i ? "," : "") + format_number(values[i]);
  text_ += "\n";
  ++rows_;
}

void CsvTable::write(const std::filesystem::path& path) const { write_text(path, text_); }

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory (" + ec.message() + ")", path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing", path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw IoError("write failed", path);
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading", path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

std::string sha256_file(const std::filesystem::path& path) { return sha256_hex(read_text(path)); }

void write_manifest(const std::filesystem::path& dir, const std::vector<std::filesystem::path>& artifacts,
                    const std::string& status) {
  if (status.find('\n') != std::string::npos) throw std::invalid_argument("manifest: status must be one line");
  std::vector<std::pair<std::string, std::string>> rows;
  for (const auto& a : artifacts) {
    const auto full = a.is_absolute() ? a : dir / a;
    rows.emplace_back(std::filesystem::relative(full, dir).generic_string(), sha256_file(full));
  }
  std::sort(rows.begin(), rows.end());
  std::string text = "status: " + status + "\n";
  for (const auto& [path, hash] : rows) text += hash + "  " + path + "\n";
  write_text(dir / "MANIFEST", text);
}

Manifest read_manifest(const std::filesystem::path& dir) {
  const auto path = dir / "MANIFEST";
  std::istringstream in(read_text(path));
  Manifest m;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (n == 1) {
      if (line.rfind("status: ", 0) != 0) throw FormatError("manifest: missing status line", n);
      m.status = line.substr(8);
      continue;
    }
    const auto sep = line.find("  ");
    if (sep != 64) throw FormatError("manifest: malformed entry", n);
    m.entries.push_back({line.substr(0, sep), line.substr(sep + 2)});
  }
  if (n == 0) throw FormatError("manifest: empty file", 0);
  return m;
}

}  // namespace glio
