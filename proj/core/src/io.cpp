#include "dpmod/io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "dpmod/error.hpp"

namespace dpmod {
namespace {

[[noreturn]] void fail(int line, const std::string& what) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

/// Round-trip exact rendering (17 significant digits).
std::string exact(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct LineReader {
  std::istream& in;
  int number = 0;
  std::string text;

  /// Next non-blank, non-comment line.
  bool next() {
    while (std::getline(in, text)) {
      ++number;
      const auto first = text.find_first_not_of(" \t\r");
      if (first == std::string::npos || text[first] == '#') continue;
      return true;
    }
    return false;
  }
};

template <typename T>
T read_token(std::istringstream& ss, int line, const char* what) {
  T value{};
  if (!(ss >> value)) fail(line, std::string("expected ") + what);
  return value;
}

void expect_end(std::istringstream& ss, int line) {
  std::string extra;
  if (ss >> extra) fail(line, "unexpected trailing token '" + extra + "'");
}

/// Header "<magic> v1 <n> [extra ints]".
std::vector<int> read_header(LineReader& reader, const std::string& magic, std::size_t count) {
  if (!reader.next()) fail(reader.number + 1, "missing '" + magic + "' header");
  std::istringstream ss(reader.text);
  std::string word;
  std::string version;
  ss >> word >> version;
  if (word != magic) fail(reader.number, "expected '" + magic + "' header");
  if (version != "v1") fail(reader.number, "unsupported version '" + version + "'");
  std::vector<int> values;
  for (std::size_t i = 0; i < count; ++i) values.push_back(read_token<int>(ss, reader.number, "integer header field"));
  expect_end(ss, reader.number);
  return values;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
  return out;
}

}  // namespace

MeshPtr read_mesh(std::istream& in) {
  LineReader reader{in, 0, {}};
  const int n = read_header(reader, "dpmesh", 1)[0];
  if (n < 1 || n > kMaxDim) fail(reader.number, "dimension must be 1, 2 or 3");

  std::vector<Point> vertices;
  std::vector<CellIndices> cells;
  std::vector<Identification> idents;
  while (reader.next()) {
    std::istringstream ss(reader.text);
    std::string tag;
    ss >> tag;
    if (tag == "v") {
      Point p(static_cast<std::size_t>(n));
      for (auto& x : p) x = read_token<double>(ss, reader.number, "vertex coordinate");
      vertices.push_back(std::move(p));
    } else if (tag == "c") {
      CellIndices c(static_cast<std::size_t>(n + 1));
      for (auto& i : c) i = read_token<int>(ss, reader.number, "cell vertex index");
      cells.push_back(std::move(c));
    } else if (tag == "ident") {
      const int a = read_token<int>(ss, reader.number, "identified vertex");
      const int b = read_token<int>(ss, reader.number, "identified vertex");
      idents.emplace_back(a, b);
    } else {
      fail(reader.number, "unknown record '" + tag + "'");
    }
    expect_end(ss, reader.number);
  }
  if (vertices.empty() || cells.empty()) fail(reader.number, "mesh needs vertices and cells");
  return build_mesh(std::move(vertices), std::move(cells), std::move(idents));
}

MeshPtr read_mesh(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_mesh(in);
}

void write_mesh(std::ostream& out, const Mesh& mesh) {
  out << "dpmesh v1 " << mesh.dimension() << '\n';
  for (const Point& p : mesh.raw_vertices()) {
    out << 'v';
    for (double x : p) out << ' ' << exact(x);
    out << '\n';
  }
  for (const CellIndices& c : mesh.raw_cells()) {
    out << 'c';
    for (int i : c) out << ' ' << i;
    out << '\n';
  }
  for (const auto& [a, b] : mesh.identifications()) out << "ident " << a << ' ' << b << '\n';
}

void write_mesh(const std::filesystem::path& path, const Mesh& mesh) {
  auto out = open_out(path);
  write_mesh(out, mesh);
}

MetricField read_metric(std::istream& in, MeshPtr mesh) {
  LineReader reader{in, 0, {}};
  const auto header = read_header(reader, "dpmetric", 2);
  const int n = header[0];
  const int count = header[1];
  if (n != mesh->dimension()) fail(reader.number, "dimension does not match the mesh");
  if (count != mesh->num_cells()) fail(reader.number, "cell count does not match the mesh");

  std::vector<Matrix> cells;
  cells.reserve(static_cast<std::size_t>(count));
  while (reader.next()) {
    if (static_cast<int>(cells.size()) == count) fail(reader.number, "more cell lines than declared");
    std::istringstream ss(reader.text);
    Matrix m(n, n);
    for (int r = 0; r < n; ++r) {
      for (int c = r; c < n; ++c) {
        m(r, c) = read_token<double>(ss, reader.number, "metric entry");
        m(c, r) = m(r, c);
      }
    }
    expect_end(ss, reader.number);
    cells.push_back(m);
  }
  if (static_cast<int>(cells.size()) != count) fail(reader.number, "fewer cell lines than declared");
  return MetricField(std::move(mesh), std::move(cells));
}

MetricField read_metric(const std::filesystem::path& path, MeshPtr mesh) {
  auto in = open_in(path);
  return read_metric(in, std::move(mesh));
}

void write_metric(std::ostream& out, const MetricField& g) {
  const int n = g.mesh()->dimension();
  out << "dpmetric v1 " << n << ' ' << g.num_cells() << '\n';
  for (const Matrix& m : g.matrices()) {
    bool first = true;
    for (int r = 0; r < n; ++r) {
      for (int c = r; c < n; ++c) {
        if (!first) out << ' ';
        out << exact(m(r, c));
        first = false;
      }
    }
    out << '\n';
  }
}

void write_metric(const std::filesystem::path& path, const MetricField& g) {
  auto out = open_out(path);
  write_metric(out, g);
}

}  // namespace dpmod
