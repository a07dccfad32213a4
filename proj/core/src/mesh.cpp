#include "dpmod/mesh.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "dpmod/error.hpp"

namespace dpmod {
namespace {

constexpr double kMinCellVolume = 1e-12;

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  int find(int i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }

  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    // Keep the smaller index as root so representatives are deterministic.
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<int> parent_;
};

double factorial(int n) {
  double r = 1.0;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

Matrix edge_matrix(const GradientMatrix& corners) {
  const auto n = corners.rows();
  Matrix m(n, n);
  for (Eigen::Index k = 0; k < n; ++k) m.col(k) = corners.col(k + 1) - corners.col(0);
  return m;
}

}  // namespace

const Cell& Mesh::cell(int cell_id) const {
  if (cell_id < 0 || cell_id >= num_cells()) {
    throw Error(ErrorCode::BadIndex, "cell " + std::to_string(cell_id) + " out of range");
  }
  return cells_[static_cast<std::size_t>(cell_id)];
}

const Edge& Mesh::edge(int edge_id) const {
  if (edge_id < 0 || edge_id >= num_edges()) {
    throw Error(ErrorCode::BadIndex, "edge " + std::to_string(edge_id) + " out of range");
  }
  return edges_[static_cast<std::size_t>(edge_id)];
}

const Vector& Mesh::position(int vertex) const {
  if (vertex < 0 || vertex >= num_vertices()) {
    throw Error(ErrorCode::BadIndex, "vertex " + std::to_string(vertex) + " out of range");
  }
  return positions_[static_cast<std::size_t>(vertex)];
}

int Mesh::vertex_of_raw(int raw_index) const {
  if (raw_index < 0 || raw_index >= static_cast<int>(raw_to_vertex_.size())) {
    throw Error(ErrorCode::BadIndex, "raw vertex " + std::to_string(raw_index) + " out of range");
  }
  return raw_to_vertex_[static_cast<std::size_t>(raw_index)];
}

Vector Mesh::cell_gradient(int cell_id, std::span<const double> f) const {
  const Cell& c = cell(cell_id);
  if (static_cast<int>(f.size()) != num_vertices()) {
    throw Error(ErrorCode::BadIndex, "function has " + std::to_string(f.size()) +
                                         " values, mesh has " + std::to_string(num_vertices()) +
                                         " vertices");
  }
  Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim + 1, 1> local(dimension_ + 1);
  for (int k = 0; k <= dimension_; ++k) local[k] = f[static_cast<std::size_t>(c.vertices[k])];
  return c.gradient * local;
}

double Mesh::cell_euclidean_volume(int cell_id) const { return cell(cell_id).volume; }

double Mesh::total_euclidean_volume() const {
  double total = 0.0;
  for (const Cell& c : cells_) total += c.volume;
  return total;
}

MeshPtr build_mesh(std::vector<Point> vertices, std::vector<CellIndices> cells,
                   std::vector<Identification> identifications) {
  if (vertices.empty() || cells.empty()) {
    throw Error(ErrorCode::BadIndex, "mesh needs at least one vertex and one cell");
  }
  const int n = static_cast<int>(vertices.front().size());
  if (n < 1 || n > kMaxDim) {
    throw Error(ErrorCode::BadDimension, "dimension " + std::to_string(n) + " not in [1, 3]");
  }
  const int raw_count = static_cast<int>(vertices.size());
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (static_cast<int>(vertices[i].size()) != n) {
      throw Error(ErrorCode::BadIndex, "vertex " + std::to_string(i) + " has " +
                                           std::to_string(vertices[i].size()) +
                                           " coordinates, expected " + std::to_string(n));
    }
  }

  auto in_range = [raw_count](int i) { return i >= 0 && i < raw_count; };

  DisjointSets sets(vertices.size());
  for (const auto& [a, b] : identifications) {
    if (!in_range(a) || !in_range(b)) {
      throw Error(ErrorCode::BadIndex, "identification (" + std::to_string(a) + ", " +
                                           std::to_string(b) + ") out of range");
    }
    sets.unite(a, b);
  }

  std::shared_ptr<Mesh> mesh(new Mesh());
  mesh->dimension_ = n;
  mesh->raw_to_vertex_.assign(vertices.size(), -1);
  std::vector<int> root_id(vertices.size(), -1);
  for (int i = 0; i < raw_count; ++i) {
    const int root = sets.find(i);
    if (root_id[static_cast<std::size_t>(root)] < 0) {
      root_id[static_cast<std::size_t>(root)] = static_cast<int>(mesh->positions_.size());
      Vector p(n);
      for (int k = 0; k < n; ++k) p[k] = vertices[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
      mesh->positions_.push_back(p);
    }
    mesh->raw_to_vertex_[static_cast<std::size_t>(i)] = root_id[static_cast<std::size_t>(root)];
  }

  std::map<std::pair<int, int>, std::vector<int>> edge_lookup;
  const double simplex_factor = factorial(n);

  for (std::size_t cid = 0; cid < cells.size(); ++cid) {
    const CellIndices& raw = cells[cid];
    if (static_cast<int>(raw.size()) != n + 1) {
      throw Error(ErrorCode::BadIndex, "cell " + std::to_string(cid) + " has " +
                                           std::to_string(raw.size()) + " vertices, expected " +
                                           std::to_string(n + 1));
    }
    Cell cell;
    cell.corners.resize(n, n + 1);
    for (int k = 0; k <= n; ++k) {
      const int r = raw[static_cast<std::size_t>(k)];
      if (!in_range(r)) {
        throw Error(ErrorCode::BadIndex,
                    "cell " + std::to_string(cid) + " references vertex " + std::to_string(r));
      }
      cell.vertices[static_cast<std::size_t>(k)] = mesh->raw_to_vertex_[static_cast<std::size_t>(r)];
      for (int d = 0; d < n; ++d) {
        cell.corners(d, k) = vertices[static_cast<std::size_t>(r)][static_cast<std::size_t>(d)];
      }
    }
    for (int a = 0; a <= n; ++a) {
      for (int b = a + 1; b <= n; ++b) {
        if (cell.vertices[static_cast<std::size_t>(a)] == cell.vertices[static_cast<std::size_t>(b)]) {
          throw Error(ErrorCode::DegenerateCell,
                      "cell " + std::to_string(cid) + " repeats a vertex");
        }
      }
    }

    Matrix m = edge_matrix(cell.corners);
    double signed_volume = m.determinant() / simplex_factor;
    if (std::abs(signed_volume) <= kMinCellVolume) {
      throw Error(ErrorCode::DegenerateCell, "cell " + std::to_string(cid) + " has volume " +
                                                 std::to_string(std::abs(signed_volume)));
    }
    if (signed_volume < 0.0) {
      // Canonical ordering: swapping the last two corners flips orientation
      // (for n = 1 that swaps the two endpoints).
      std::swap(cell.vertices[static_cast<std::size_t>(n - 1)], cell.vertices[static_cast<std::size_t>(n)]);
      cell.corners.col(n - 1).swap(cell.corners.col(n));
      m = edge_matrix(cell.corners);
      signed_volume = -signed_volume;
    }
    cell.volume = signed_volume;

    const Matrix inv_t = m.inverse().transpose();
    cell.gradient.resize(n, n + 1);
    cell.gradient.col(0) = -inv_t.rowwise().sum();
    cell.gradient.rightCols(n) = inv_t;

    const int cell_index = static_cast<int>(cid);
    for (int i = 0; i <= n; ++i) {
      for (int j = i + 1; j <= n; ++j) {
        int a = cell.vertices[static_cast<std::size_t>(i)];
        int b = cell.vertices[static_cast<std::size_t>(j)];
        Vector chart = cell.corners.col(j) - cell.corners.col(i);
        if (a > b) {
          std::swap(a, b);
          chart = -chart;
        }
        auto& candidates = edge_lookup[{a, b}];
        int found = -1;
        for (int e : candidates) {
          const Vector& other = mesh->edges_[static_cast<std::size_t>(e)].chart;
          if ((other - chart).norm() <= 1e-9 * (1.0 + chart.norm())) {
            found = e;
            break;
          }
        }
        if (found < 0) {
          found = static_cast<int>(mesh->edges_.size());
          mesh->edges_.push_back(Edge{a, b, chart, {}});
          candidates.push_back(found);
        }
        mesh->edges_[static_cast<std::size_t>(found)].cells.push_back(cell_index);
        cell.edges.push_back(found);
      }
    }
    mesh->cells_.push_back(std::move(cell));
  }

  DisjointSets components(mesh->positions_.size());
  for (const Edge& e : mesh->edges_) components.unite(e.a, e.b);
  for (int v = 1; v < mesh->num_vertices(); ++v) {
    if (components.find(v) != components.find(0)) {
      throw Error(ErrorCode::Disconnected,
                  "vertex " + std::to_string(v) + " is not connected to vertex 0");
    }
  }

  mesh->raw_vertices_ = std::move(vertices);
  mesh->raw_cells_ = std::move(cells);
  mesh->identifications_ = std::move(identifications);
  return mesh;
}

Subdivision subdivide(const Mesh& mesh) {
  const int n = mesh.dimension();
  if (n > 2) {
    throw Error(ErrorCode::BadDimension, "uniform subdivision is implemented for n <= 2");
  }
  const int nv = mesh.num_vertices();

  // Representatives first: manifold vertex v keeps id v, the midpoint of
  // edge e becomes vertex nv + e. Every fine cell then gets private corner
  // copies at its unwrapped chart positions, glued back by identifications.
  std::vector<Point> vertices;
  std::vector<CellIndices> cells;
  std::vector<Identification> idents;
  std::vector<int> parent;

  auto to_point = [](const Vector& v) { return Point(v.data(), v.data() + v.size()); };
  for (int v = 0; v < nv; ++v) vertices.push_back(to_point(mesh.position(v)));
  for (const Edge& e : mesh.edges()) {
    const Vector mid = mesh.position(e.a) + 0.5 * e.chart;
    vertices.push_back(to_point(mid));
  }

  auto add_copy = [&](const Vector& at, int representative) {
    const int id = static_cast<int>(vertices.size());
    vertices.push_back(to_point(at));
    idents.emplace_back(representative, id);
    return id;
  };

  for (int cid = 0; cid < mesh.num_cells(); ++cid) {
    const Cell& c = mesh.cell(cid);
    std::array<int, 3> corner{};
    for (int k = 0; k <= n; ++k) corner[static_cast<std::size_t>(k)] = add_copy(c.corners.col(k), c.vertices[static_cast<std::size_t>(k)]);
    // Edges of a cell are stored in (0,1), (0,2), (1,2) order.
    std::array<int, 3> mid{};
    int slot = 0;
    for (int i = 0; i <= n; ++i) {
      for (int j = i + 1; j <= n; ++j) {
        const Vector at = 0.5 * (c.corners.col(i) + c.corners.col(j));
        mid[static_cast<std::size_t>(slot)] =
            add_copy(at, nv + c.edges[static_cast<std::size_t>(slot)]);
        ++slot;
      }
    }
    if (n == 1) {
      cells.push_back({corner[0], mid[0]});
      cells.push_back({mid[0], corner[1]});
    } else {
      const int m01 = mid[0], m02 = mid[1], m12 = mid[2];
      cells.push_back({corner[0], m01, m02});
      cells.push_back({m01, corner[1], m12});
      cells.push_back({m02, m12, corner[2]});
      cells.push_back({m01, m12, m02});
    }
    const int children = n == 1 ? 2 : 4;
    for (int k = 0; k < children; ++k) parent.push_back(cid);
  }

  return Subdivision{build_mesh(std::move(vertices), std::move(cells), std::move(idents)),
                     std::move(parent)};
}

}  // namespace dpmod
