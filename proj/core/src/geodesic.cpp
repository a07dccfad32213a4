#include "dpmod/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <queue>

#include "dpmod/error.hpp"
#include "dpmod/format.hpp"
#include "dpmod/parallel.hpp"

namespace dpmod {
namespace {

struct Adjacency {
  std::vector<std::size_t> offsets;
  std::vector<int> targets;
  std::vector<double> weights;
};

Adjacency build_adjacency(const WeightedGraph& graph) {
  const auto nv = static_cast<std::size_t>(graph.num_vertices);
  std::vector<std::size_t> degree(nv, 0);
  for (const auto& l : graph.links) {
    if (l.a < 0 || l.b < 0 || l.a >= graph.num_vertices || l.b >= graph.num_vertices) {
      throw Error(ErrorCode::BadIndex, "graph link out of range");
    }
    ++degree[static_cast<std::size_t>(l.a)];
    ++degree[static_cast<std::size_t>(l.b)];
  }
  Adjacency adj;
  adj.offsets.assign(nv + 1, 0);
  for (std::size_t v = 0; v < nv; ++v) adj.offsets[v + 1] = adj.offsets[v] + degree[v];
  adj.targets.resize(adj.offsets.back());
  adj.weights.resize(adj.offsets.back());
  std::vector<std::size_t> fill(adj.offsets.begin(), adj.offsets.end() - 1);
  for (const auto& l : graph.links) {
    const auto a = static_cast<std::size_t>(l.a);
    const auto b = static_cast<std::size_t>(l.b);
    adj.targets[fill[a]] = l.b;
    adj.weights[fill[a]++] = l.weight;
    adj.targets[fill[b]] = l.a;
    adj.weights[fill[b]++] = l.weight;
  }
  return adj;
}

std::vector<double> dijkstra(const Adjacency& adj, int source) {
  const std::size_t nv = adj.offsets.size() - 1;
  std::vector<double> dist(nv, std::numeric_limits<double>::infinity());
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  dist[static_cast<std::size_t>(source)] = 0.0;
  queue.emplace(0.0, source);
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (d > dist[static_cast<std::size_t>(u)]) continue;
    for (std::size_t k = adj.offsets[static_cast<std::size_t>(u)]; k < adj.offsets[static_cast<std::size_t>(u) + 1]; ++k) {
      const int v = adj.targets[k];
      const double nd = d + adj.weights[k];
      if (nd < dist[static_cast<std::size_t>(v)]) {
        dist[static_cast<std::size_t>(v)] = nd;
        queue.emplace(nd, v);
      }
    }
  }
  return dist;
}

}  // namespace

double edge_length(const Mesh& mesh, const MetricField& g, int edge_id) {
  if (g.mesh().get() != &mesh) throw Error(ErrorCode::MeshMismatch, "metric belongs to another mesh");
  const Edge& e = mesh.edge(edge_id);
  const int n = mesh.dimension();
  Matrix mean = Matrix::Zero(n, n);
  double weight = 0.0;
  for (int c : e.cells) {
    const double vol = mesh.cell_euclidean_volume(c);
    mean += vol * g[c];
    weight += vol;
  }
  mean /= weight;
  return std::sqrt(e.chart.dot(mean * e.chart));
}

WeightedGraph metric_graph(const MetricField& g) {
  const Mesh& mesh = *g.mesh();
  WeightedGraph graph;
  graph.num_vertices = mesh.num_vertices();
  graph.links.reserve(static_cast<std::size_t>(mesh.num_edges()));
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Edge& edge = mesh.edge(e);
    graph.links.push_back({edge.a, edge.b, edge_length(mesh, g, e)});
  }
  return graph;
}

std::vector<double> single_source_distances(const WeightedGraph& graph, int source) {
  if (source < 0 || source >= graph.num_vertices) throw Error(ErrorCode::BadIndex, "source out of range");
  return dijkstra(build_adjacency(graph), source);
}

DistanceMatrix all_pairs_distances(const WeightedGraph& graph, std::string label) {
  const Adjacency adj = build_adjacency(graph);
  const auto nv = static_cast<std::size_t>(graph.num_vertices);
  std::vector<double> values(nv * nv);
  parallel_for(nv, [&](std::size_t s) {
    const std::vector<double> row = dijkstra(adj, static_cast<int>(s));
    std::copy(row.begin(), row.end(), values.begin() + static_cast<std::ptrdiff_t>(s * nv));
  });
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::Disconnected, "graph is not connected");
  }
  // Dijkstra sums edges in different orders from either end; average so the
  // matrix is exactly symmetric.
  for (std::size_t u = 0; u < nv; ++u) {
    for (std::size_t v = u + 1; v < nv; ++v) {
      const double m = 0.5 * (values[u * nv + v] + values[v * nv + u]);
      values[u * nv + v] = m;
      values[v * nv + u] = m;
    }
  }
  return DistanceMatrix(graph.num_vertices, std::move(values), std::move(label));
}

DistanceMatrix all_pairs_distances(const MetricField& g, std::string label) {
  return all_pairs_distances(metric_graph(g), std::move(label));
}

double diameter(const DistanceMatrix& dm) {
  double best = 0.0;
  for (double v : dm.values()) best = std::max(best, v);
  return best;
}

void write_distance_csv(std::ostream& out, const DistanceMatrix& dm) {
  out << "u,v,dist\n";
  for (int u = 0; u < dm.size(); ++u) {
    for (int v = u + 1; v < dm.size(); ++v) out << u << ',' << v << ',' << format_double(dm(u, v)) << '\n';
  }
}

}  // namespace dpmod
