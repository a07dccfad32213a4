#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dpmod/metric.hpp"

namespace dpmod {

/// Symmetric matrix of vertex-pair graph distances.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  DistanceMatrix(int size, std::vector<double> values, std::string label)
      : size_(size), values_(std::move(values)), label_(std::move(label)) {}

  [[nodiscard]] int size() const noexcept { return size_; }
  [[nodiscard]] double operator()(int u, int v) const {
    return values_[static_cast<std::size_t>(u) * static_cast<std::size_t>(size_) + static_cast<std::size_t>(v)];
  }
  /// Which metric field produced the distances ("g", "g0", ...).
  [[nodiscard]] const std::string& label() const noexcept { return label_; }
  [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }

 private:
  int size_ = 0;
  std::vector<double> values_;
  std::string label_;
};

/// Plain undirected weighted graph, for callers that want graph distances
/// without a mesh (and for oracle tests).
struct WeightedGraph {
  struct Link {
    int a;
    int b;
    double weight;
  };
  int num_vertices = 0;
  std::vector<Link> links;
};

/// sqrt(e^T Gbar e) with Gbar the Euclidean-volume-weighted mean of G over the
/// cells that contain the edge.
double edge_length(const Mesh& mesh, const MetricField& g, int edge);

/// The 1-skeleton of the mesh weighted by `edge_length`.
WeightedGraph metric_graph(const MetricField& g);

/// Dijkstra from one source; ties resolve to the smaller vertex index.
std::vector<double> single_source_distances(const WeightedGraph& graph, int source);

/// All-pairs distances by one Dijkstra run per source (run concurrently,
/// assembled in source order). Throws Error{Disconnected}.
DistanceMatrix all_pairs_distances(const WeightedGraph& graph, std::string label = "graph");
DistanceMatrix all_pairs_distances(const MetricField& g, std::string label = "g");

/// Largest entry.
double diameter(const DistanceMatrix& dm);

/// CSV with header `u,v,dist`, one row per unordered pair u < v.
void write_distance_csv(std::ostream& out, const DistanceMatrix& dm);

}  // namespace dpmod
