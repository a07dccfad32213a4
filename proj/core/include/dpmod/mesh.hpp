#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "dpmod/linalg.hpp"

namespace dpmod {

/// A vertex position in the single background chart, length n.
using Point = std::vector<double>;
/// n+1 indices into a vertex list.
using CellIndices = std::vector<int>;
/// Pair of raw vertex indices that denote the same manifold point.
using Identification = std::pair<int, int>;

/// An edge of the 1-skeleton between two manifold vertices.
///
/// `chart` is the chart displacement from `a` to `b` as seen inside the
/// incident cells. On a torus two distinct edges may join the same vertex
/// pair (different sides of the fundamental domain), so edges are keyed by
/// both the endpoints and the displacement.
struct Edge {
  int a = 0;
  int b = 0;
  Vector chart;
  std::vector<int> cells;
};

struct Cell {
  /// Manifold vertex ids, ordered so the chart orientation is positive.
  std::array<int, kMaxDim + 1> vertices{};
  /// Corner positions in the chart (unwrapped across identifications), n x (n+1).
  GradientMatrix corners;
  GradientMatrix gradient;
  double volume = 0.0;
  std::vector<int> edges;
};

/// Simplicial mesh of an n-manifold (1 <= n <= 3) in one coordinate chart.
///
/// Raw vertices may be aliased through identification pairs (flat tori);
/// every public index refers to the resulting *manifold* vertices, numbered
/// in order of their smallest raw representative. Immutable once built and
/// shared through `std::shared_ptr<const Mesh>`.
class Mesh {
 public:
  [[nodiscard]] int dimension() const noexcept { return dimension_; }
  [[nodiscard]] int num_vertices() const noexcept { return static_cast<int>(positions_.size()); }
  [[nodiscard]] int num_cells() const noexcept { return static_cast<int>(cells_.size()); }
  [[nodiscard]] int num_edges() const noexcept { return static_cast<int>(edges_.size()); }

  [[nodiscard]] const Cell& cell(int cell_id) const;
  [[nodiscard]] std::span<const Cell> cells() const noexcept { return cells_; }
  [[nodiscard]] const Edge& edge(int edge_id) const;
  [[nodiscard]] std::span<const Edge> edges() const noexcept { return edges_; }

  /// Chart position of the smallest raw representative of a vertex.
  [[nodiscard]] const Vector& position(int vertex) const;
  [[nodiscard]] bool has_identifications() const noexcept { return !identifications_.empty(); }
  [[nodiscard]] int vertex_of_raw(int raw_index) const;

  [[nodiscard]] std::span<const Point> raw_vertices() const noexcept { return raw_vertices_; }
  [[nodiscard]] std::span<const CellIndices> raw_cells() const noexcept { return raw_cells_; }
  [[nodiscard]] std::span<const Identification> identifications() const noexcept {
    return identifications_;
  }

  /// Constant chart covector of the piecewise-linear interpolant of `f` on a cell.
  [[nodiscard]] Vector cell_gradient(int cell_id, std::span<const double> f) const;
  [[nodiscard]] double cell_euclidean_volume(int cell_id) const;
  [[nodiscard]] double total_euclidean_volume() const;

 private:
  friend std::shared_ptr<const Mesh> build_mesh(std::vector<Point>, std::vector<CellIndices>,
                                                std::vector<Identification>);
  Mesh() = default;

  int dimension_ = 0;
  std::vector<Point> raw_vertices_;
  std::vector<CellIndices> raw_cells_;
  std::vector<Identification> identifications_;
  std::vector<int> raw_to_vertex_;
  std::vector<Vector> positions_;
  std::vector<Cell> cells_;
  std::vector<Edge> edges_;
};

using MeshPtr = std::shared_ptr<const Mesh>;

/// Validates and assembles a mesh.
///
/// Throws Error{BadIndex} for out-of-range indices or malformed tuples,
/// Error{DegenerateCell} when a simplex has chart volume <= 1e-12 or repeats a
/// manifold vertex, and Error{Disconnected} when the 1-skeleton is not
/// connected. Cells with negative orientation are reordered, never rejected.
MeshPtr build_mesh(std::vector<Point> vertices, std::vector<CellIndices> cells,
                   std::vector<Identification> identifications = {});

/// Result of one uniform refinement step; `parent[c]` is the coarse cell that
/// contains fine cell c.
struct Subdivision {
  MeshPtr mesh;
  std::vector<int> parent;
};

/// Splits every interval in two (n = 1) or every triangle in four through edge
/// midpoints (n = 2). Coarse vertex ids are preserved in the fine mesh.
Subdivision subdivide(const Mesh& mesh);

}  // namespace dpmod
