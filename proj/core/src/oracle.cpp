#include "dpmod/oracle.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <queue>
#include <string>

#include "dpmod/error.hpp"

namespace dpmod {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct OracleCell {
  std::vector<int> vertices;
  double weight = 0.0;  // sqrt(det G) |c|
  Matrix g_inv;
  GradientMatrix gradient;
  // Local vertex pairs of every edge and sqrt(e^T G e).
  std::vector<std::pair<int, int>> edges;
  std::vector<double> edge_lengths;
};

/// A lattice of candidate values for every free vertex: centre + k * pitch
/// with |k| <= half_width.
struct Lattice {
  std::vector<double> center;
  double pitch = 0.0;
  int half_width = 0;
};

class GridSearch {
 public:
  GridSearch(int x, int y, const MetricField& g, const GaugeParams& params)
      : g_(g), params_(params), x_(x), y_(y), nv_(g.mesh()->num_vertices()), p_(params.p()) {
    const Mesh& mesh = *g.mesh();
    cap_.assign(static_cast<std::size_t>(nv_ * nv_), kInf);
    for (const HolderPair& hp : params.pairs()) {
      set_cap(hp.u, hp.v, params.D() * hp.weight);
    }
    set_cap(x, y, params.D() * params.holder_weight(x, y));

    for (int c = 0; c < mesh.num_cells(); ++c) {
      const Cell& cell = mesh.cell(c);
      const int k = mesh.dimension() + 1;
      OracleCell oc;
      oc.vertices.assign(cell.vertices.begin(), cell.vertices.begin() + k);
      oc.weight = std::sqrt(g[c].determinant()) * cell.volume;
      oc.g_inv = g[c].inverse();
      oc.gradient = cell.gradient;
      for (int a = 0; a < k; ++a) {
        for (int b = a + 1; b < k; ++b) {
          const Vector e = cell.corners.col(b) - cell.corners.col(a);
          oc.edges.emplace_back(a, b);
          oc.edge_lengths.push_back(std::sqrt(e.dot(g[c] * e)));
        }
      }
      cells_.push_back(std::move(oc));
    }

    // x first, the rest in breadth-first order from x so that every new
    // vertex shares an edge with an assigned one and the bounds bite early.
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(nv_));
    for (const Edge& e : mesh.edges()) {
      adj[static_cast<std::size_t>(e.a)].push_back(e.b);
      adj[static_cast<std::size_t>(e.b)].push_back(e.a);
    }
    for (auto& row : adj) std::sort(row.begin(), row.end());
    std::vector<bool> seen(static_cast<std::size_t>(nv_), false);
    std::queue<int> queue;
    queue.push(x);
    seen[static_cast<std::size_t>(x)] = true;
    seen[static_cast<std::size_t>(y)] = true;
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop();
      order_.push_back(u);
      for (int w : adj[static_cast<std::size_t>(u)]) {
        if (!seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = true;
          queue.push(w);
        }
      }
    }
    for (int v = 0; v < nv_; ++v) {
      if (!seen[static_cast<std::size_t>(v)]) order_.push_back(v);
    }
  }

  [[nodiscard]] double cap(int u, int v) const { return cap_[static_cast<std::size_t>(u * nv_ + v)]; }

  /// A feasible function with f(x) = level whose other free values lie on the
  /// lattice, if one exists. With `lowest`, the one of least energy.
  std::optional<FunctionField> complete(double level, const Lattice& lattice, bool lowest = false) {
    f_.assign(static_cast<std::size_t>(nv_), 0.0);
    assigned_.assign(static_cast<std::size_t>(nv_), false);
    assigned_[static_cast<std::size_t>(y_)] = true;
    if (std::abs(level) > cap(x_, y_)) return std::nullopt;
    f_[static_cast<std::size_t>(x_)] = level;
    assigned_[static_cast<std::size_t>(x_)] = true;
    if (energy_bound() > 1.0) return std::nullopt;
    lattice_ = &lattice;
    lowest_ = lowest;
    budget_ = 1.0;
    found_.reset();
    descend(1);
    return found_;
  }

 private:
  void set_cap(int u, int v, double c) {
    cap_[static_cast<std::size_t>(u * nv_ + v)] = std::min(cap(u, v), c);
    cap_[static_cast<std::size_t>(v * nv_ + u)] = std::min(cap(v, u), c);
  }

  /// Lower bound on E_p over completions of the current partial assignment.
  /// A fully assigned cell contributes its exact energy; otherwise every
  /// assigned edge gives |delta| <= |df|_{g^-1} |e|_g.
  double energy_bound() const {
    double total = 0.0;
    for (const OracleCell& c : cells_) {
      bool full = true;
      for (int v : c.vertices) full = full && assigned_[static_cast<std::size_t>(v)];
      if (full) {
        Eigen::Vector4d local = Eigen::Vector4d::Zero();
        for (std::size_t k = 0; k < c.vertices.size(); ++k) local[static_cast<Eigen::Index>(k)] = f_[static_cast<std::size_t>(c.vertices[k])];
        const Vector df = c.gradient * local.head(static_cast<Eigen::Index>(c.vertices.size()));
        total += std::pow(std::max(0.0, df.dot(c.g_inv * df)), 0.5 * p_) * c.weight;
        continue;
      }
      double best = 0.0;
      for (std::size_t e = 0; e < c.edges.size(); ++e) {
        const int a = c.vertices[static_cast<std::size_t>(c.edges[e].first)];
        const int b = c.vertices[static_cast<std::size_t>(c.edges[e].second)];
        if (!assigned_[static_cast<std::size_t>(a)] || !assigned_[static_cast<std::size_t>(b)]) continue;
        const double slope = std::abs(f_[static_cast<std::size_t>(a)] - f_[static_cast<std::size_t>(b)]) / c.edge_lengths[e];
        best = std::max(best, std::pow(slope, p_) * c.weight);
      }
      total += best;
    }
    return total;
  }

  bool descend(std::size_t depth) {
    if (depth == order_.size()) return accept();
    const int v = order_[depth];
    double lo = -kInf;
    double hi = kInf;
    for (int u = 0; u < nv_; ++u) {
      if (!assigned_[static_cast<std::size_t>(u)]) continue;
      const double c = cap(u, v);
      lo = std::max(lo, f_[static_cast<std::size_t>(u)] - c);
      hi = std::min(hi, f_[static_cast<std::size_t>(u)] + c);
    }
    const double center = lattice_->center[static_cast<std::size_t>(v)];
    const double h = lattice_->pitch;
    const int k_lo = std::max(-lattice_->half_width, static_cast<int>(std::ceil((lo - center) / h - 1e-9)));
    const int k_hi = std::min(lattice_->half_width, static_cast<int>(std::floor((hi - center) / h + 1e-9)));
    if (k_lo > k_hi) return false;

    // Middle of the admissible range first, then outward.
    const int mid = k_lo + (k_hi - k_lo) / 2;
    assigned_[static_cast<std::size_t>(v)] = true;
    for (int step = 0; step <= k_hi - k_lo; ++step) {
      const int k = (step % 2 == 0) ? mid + step / 2 : mid - (step + 1) / 2;
      if (k < k_lo || k > k_hi) continue;
      f_[static_cast<std::size_t>(v)] = center + k * h;
      if (energy_bound() <= budget_ && descend(depth + 1)) return true;
    }
    assigned_[static_cast<std::size_t>(v)] = false;
    return false;
  }

  /// Records a feasible leaf. Returns true to stop the search.
  bool accept() {
    const double e = energy_p(f_, g_, p_);
    if (e > budget_) return false;
    if (holder_seminorm(f_, params_) > params_.D()) return false;
    if (std::abs(f_[static_cast<std::size_t>(x_)] - f_[static_cast<std::size_t>(y_)]) > cap(x_, y_)) return false;
    found_ = f_;
    budget_ = e;
    return !lowest_;
  }

  const MetricField& g_;
  const GaugeParams& params_;
  int x_;
  int y_;
  int nv_;
  double p_;
  std::vector<double> cap_;
  std::vector<OracleCell> cells_;
  std::vector<int> order_;
  const Lattice* lattice_ = nullptr;
  FunctionField f_;
  std::vector<bool> assigned_;
  bool lowest_ = false;
  double budget_ = 1.0;
  std::optional<FunctionField> found_;
};

constexpr int kCoarseSteps = 50;
constexpr int kRefinements = 3;
constexpr int kMaxRecentres = 200;

}  // namespace

BruteForceResult brute_force_dp(int x, int y, const MetricField& g, const MetricField& g0,
                                const GaugeParams& params) {
  const Mesh& mesh = *g.mesh();
  if (g0.mesh() != g.mesh()) throw Error(ErrorCode::MeshMismatch, "g and g0 live on different meshes");
  const int nv = mesh.num_vertices();
  if (nv > kOracleMaxVertices) {
    throw Error(ErrorCode::TooManyVertices, std::to_string(nv) + " vertices; the oracle handles at most 6");
  }
  if (x < 0 || y < 0 || x >= nv || y >= nv) throw Error(ErrorCode::BadIndex, "vertex out of range");
  if (x == y) throw Error(ErrorCode::SameVertex, "x = y");
  if (!params.modified()) throw Error(ErrorCode::BadConfig, "the grid oracle needs a finite D");
  if (params.background_distances().size() != nv) throw Error(ErrorCode::MeshMismatch, "pair data size");

  double max_weight = params.holder_weight(x, y);
  for (const HolderPair& hp : params.pairs()) max_weight = std::max(max_weight, hp.weight);
  const double bound = params.D() * max_weight;

  GridSearch search(x, y, g, params);
  const double top = std::min(bound, search.cap(x, y));

  // Coarse pass over [-B, B]^free.
  Lattice lattice{std::vector<double>(static_cast<std::size_t>(nv), 0.0), bound / kCoarseSteps, kCoarseSteps};
  FunctionField best(static_cast<std::size_t>(nv), 0.0);
  double best_value = 0.0;
  for (int k = static_cast<int>(std::floor(top / lattice.pitch + 1e-9)); k >= 1; --k) {
    if (auto hit = search.complete(k * lattice.pitch, lattice)) {
      best = *hit;
      best_value = k * lattice.pitch;
      break;
    }
  }

  // Each round searches +-(old pitch) around the incumbent at a tenth of
  // the pitch, recentring the box on every improvement. The incumbent is the
  // least-energy completion at its level, which leaves room to climb.
  for (int round = 0; round < kRefinements; ++round) {
    const double old_pitch = lattice.pitch;
    lattice.pitch = old_pitch / 10.0;
    lattice.half_width = 10;
    for (int recentre = 0; recentre < kMaxRecentres; ++recentre) {
      lattice.center = best;
      const double base = best_value;
      bool improved = false;
      for (int k = lattice.half_width; k >= 1; --k) {
        const double level = base + k * lattice.pitch;
        if (level > top * (1.0 + 1e-12)) continue;
        if (auto hit = search.complete(level, lattice, true)) {
          best = *hit;
          best_value = level;
          improved = true;
          break;
        }
      }
      if (!improved) {
        // Same level, lower energy: a sideways step that may unlock a climb.
        const double before = energy_p(best, g, params.p());
        if (auto hit = search.complete(base, lattice, true)) {
          if (energy_p(*hit, g, params.p()) < before - 1e-12) {
            best = *hit;
            improved = true;
          }
        }
      }
      if (!improved) break;
    }
  }

  return {best_value, lattice.pitch, std::move(best)};
}

Analytic1DResult analytic_1d_dp(std::span<const double> a, std::span<const double> lengths, double p,
                                double D, std::span<const double> a0) {
  if (a.size() != lengths.size() || a0.size() != lengths.size() || a.empty()) {
    throw Error(ErrorCode::BadConfig, "chain data must have one entry per cell");
  }
  if (!(p > 1.0)) throw Error(ErrorCode::BadExponent, "p must exceed 1");
  const double t = (p - 1.0) / p;
  double mass = 0.0;
  double mass0 = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) {
    mass += a[c] * lengths[c];
    mass0 += a0[c] * lengths[c];
  }
  const double free_value = std::pow(mass, t);
  Analytic1DResult out;
  if (!std::isfinite(D)) {
    out.value = free_value;
    return out;
  }

  // Candidate 1: f' = c a with c = mass^(-1/p); check every vertex pair.
  const std::size_t m = a.size();
  std::vector<double> prefix(m + 1, 0.0);
  std::vector<double> prefix0(m + 1, 0.0);
  for (std::size_t c = 0; c < m; ++c) {
    prefix[c + 1] = prefix[c] + a[c] * lengths[c];
    prefix0[c + 1] = prefix0[c] + a0[c] * lengths[c];
  }
  const double scale = std::pow(mass, -1.0 / p);
  bool free_ok = true;
  for (std::size_t i = 0; i <= m && free_ok; ++i) {
    for (std::size_t j = i + 1; j <= m; ++j) {
      const double rise = scale * (prefix[j] - prefix[i]);
      if (rise > D * std::pow(prefix0[j] - prefix0[i], t) * (1.0 + 1e-12)) {
        free_ok = false;
        break;
      }
    }
  }
  if (free_ok) {
    out.value = free_value;
    return out;
  }

  // Candidate 2: f' = (cap / L0) a0 reaches the endpoint cap and meets all
  // pair bounds since (d0(u,v)/L0)^(1-t) <= 1.
  const double capped = D * std::pow(mass0, t);
  double energy = 0.0;
  for (std::size_t c = 0; c < m; ++c) {
    const double slope = capped * a0[c] / mass0;
    energy += std::pow(slope / a[c], p) * a[c] * lengths[c];
  }
  out.value = std::min(free_value, capped);
  if (energy <= 1.0 + 1e-12) {
    out.cap_active = true;
  } else {
    out.interior_binding = true;
  }
  return out;
}

Analytic1DResult analytic_1d_dp(int x, int y, const MetricField& g, const MetricField& g0, double p,
                                double D) {
  const Mesh& mesh = *g.mesh();
  if (mesh.dimension() != 1) throw Error(ErrorCode::NotOneDimensional, "mesh dimension is " + std::to_string(mesh.dimension()));
  if (mesh.has_identifications()) throw Error(ErrorCode::NotOneDimensional, "closed 1-D meshes are not chains");
  if (g0.mesh() != g.mesh()) throw Error(ErrorCode::MeshMismatch, "g and g0 live on different meshes");
  const int nv = mesh.num_vertices();
  if (x < 0 || y < 0 || x >= nv || y >= nv) throw Error(ErrorCode::BadIndex, "vertex out of range");
  if (x == y) throw Error(ErrorCode::SameVertex, "x = y");

  // On a connected chain the cells between x and y are those whose chart
  // interval lies between the two endpoint coordinates.
  const double lo = std::min(mesh.position(x)[0], mesh.position(y)[0]);
  const double hi = std::max(mesh.position(x)[0], mesh.position(y)[0]);
  std::vector<double> a;
  std::vector<double> a0;
  std::vector<double> lengths;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const Cell& cell = mesh.cell(c);
    const double c_lo = std::min(cell.corners(0, 0), cell.corners(0, 1));
    const double c_hi = std::max(cell.corners(0, 0), cell.corners(0, 1));
    if (c_lo >= lo - 1e-14 && c_hi <= hi + 1e-14) {
      a.push_back(std::sqrt(g[c](0, 0)));
      a0.push_back(std::sqrt(g0[c](0, 0)));
      lengths.push_back(cell.volume);
    }
  }
  return analytic_1d_dp(a, lengths, p, D, a0);
}

}  // namespace dpmod
