#include "dpmod/families.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "dpmod/error.hpp"

namespace dpmod {
namespace {

/// Raw index of the grid point with integer coordinates `idx` on a
/// (res+1)^n lattice.
int lattice_index(const std::array<int, kMaxDim>& idx, int n, int res) {
  int out = 0;
  int stride = 1;
  for (int d = 0; d < n; ++d) {
    out += idx[static_cast<std::size_t>(d)] * stride;
    stride *= res + 1;
  }
  return out;
}

int ipow(int base, int exp) {
  int out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

std::array<int, kMaxDim> unflatten(int flat, int n, int extent) {
  std::array<int, kMaxDim> idx{};
  for (int d = 0; d < n; ++d) {
    idx[static_cast<std::size_t>(d)] = flat % extent;
    flat /= extent;
  }
  return idx;
}

Vector barycenter(const Cell& cell, int n) {
  return cell.corners.leftCols(n + 1).rowwise().mean();
}

/// Coordinate offset, wrapped to the nearest periodic image on a torus.
double offset(double a, double b, bool periodic) {
  double d = a - b;
  if (periodic) d -= std::round(d);
  return d;
}

}  // namespace

Domain make_flat(int n, int resolution, bool torus) {
  if (n < 1 || n > kMaxDim) throw Error(ErrorCode::BadDimension, "dimension " + std::to_string(n) + " not in 1..3");
  if (resolution < 2) throw Error(ErrorCode::BadConfig, "resolution must be at least 2 cells per axis");
  const int res = resolution;

  std::vector<Point> vertices;
  const int count = ipow(res + 1, n);
  vertices.reserve(static_cast<std::size_t>(count));
  for (int v = 0; v < count; ++v) {
    const auto idx = unflatten(v, n, res + 1);
    Point pt(static_cast<std::size_t>(n));
    for (int d = 0; d < n; ++d) pt[static_cast<std::size_t>(d)] = static_cast<double>(idx[static_cast<std::size_t>(d)]) / res;
    vertices.push_back(std::move(pt));
  }

  // Kuhn simplices: walk from the cube's base corner along the axes in every
  // order of the n coordinate directions.
  std::array<int, kMaxDim> perm{};
  std::iota(perm.begin(), perm.begin() + n, 0);
  std::vector<std::array<int, kMaxDim>> orders;
  do {
    orders.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.begin() + n));

  std::vector<CellIndices> cells;
  for (int cube = 0; cube < ipow(res, n); ++cube) {
    const auto base = unflatten(cube, n, res);
    for (const auto& order : orders) {
      CellIndices cell;
      auto corner = base;
      cell.push_back(lattice_index(corner, n, res));
      for (int k = 0; k < n; ++k) {
        ++corner[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])];
        cell.push_back(lattice_index(corner, n, res));
      }
      cells.push_back(std::move(cell));
    }
  }

  std::vector<Identification> idents;
  if (torus) {
    for (int v = 0; v < count; ++v) {
      const auto idx = unflatten(v, n, res + 1);
      for (int d = 0; d < n; ++d) {
        if (idx[static_cast<std::size_t>(d)] != res) continue;
        auto image = idx;
        image[static_cast<std::size_t>(d)] = 0;
        idents.emplace_back(v, lattice_index(image, n, res));
      }
    }
  }

  MeshPtr mesh = build_mesh(std::move(vertices), std::move(cells), std::move(idents));
  MetricField metric = MetricField::identity(mesh);
  return Domain{std::move(mesh), std::move(metric), resolution, torus};
}

SpikeSchedule SpikeSchedule::defaults(int n) {
  SpikeSchedule s;
  s.amplitude_scale = 2.0;
  s.radius_scale = 0.49;
  s.epsilon = n == 3 ? 0.5 : 0.0;
  s.profile = n == 3 ? SpikeProfile::Tube : SpikeProfile::Point;
  return s;
}

SpikeShape SpikeSchedule::shape(int j) const {
  if (j < 1) throw Error(ErrorCode::BadSchedule, "sequence index must be >= 1");
  SpikeShape out;
  out.amplitude = amplitude_scale * j;
  out.radius = radius_scale * std::pow(static_cast<double>(j), -(1.0 + epsilon));
  out.center = center;
  out.profile = profile;
  return out;
}

MetricField make_spike(const Domain& base, const SpikeShape& shape) {
  const Mesh& mesh = *base.mesh;
  const int n = mesh.dimension();
  if (!(shape.amplitude >= 0.0)) throw Error(ErrorCode::BadSchedule, "spike amplitude must be >= 0");
  if (!(shape.radius > 0.0) || !(shape.radius < 0.5)) {
    throw Error(ErrorCode::BadSchedule, "spike radius must lie in (0, 1/2)");
  }
  std::vector<double> center = shape.center;
  if (center.empty()) center.assign(static_cast<std::size_t>(n), 0.5);
  if (static_cast<int>(center.size()) != n) throw Error(ErrorCode::BadSchedule, "spike centre has wrong dimension");

  const int axis_dims = (shape.profile == SpikeProfile::Tube && n > 1) ? n - 1 : n;
  std::vector<Matrix> cells;
  cells.reserve(static_cast<std::size_t>(mesh.num_cells()));
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const Vector b = barycenter(mesh.cell(c), n);
    double dist2 = 0.0;
    for (int d = 0; d < axis_dims; ++d) {
      const double o = offset(b[d], center[static_cast<std::size_t>(d)], base.torus);
      dist2 += o * o;
    }
    const double phi = 1.0 + shape.amplitude * std::max(0.0, 1.0 - std::sqrt(dist2) / shape.radius);
    cells.push_back(phi * phi * base.metric[c]);
  }
  return MetricField(base.mesh, std::move(cells));
}

SequenceMember make_spike_sequence(const Domain& base, const SpikeSchedule& schedule, int j, double p) {
  MetricField g = make_spike(base, schedule.shape(j));
  HypothesisReport report = hypothesis_functionals(g, base.metric, p);
  return {j, std::move(g), report};
}

MetricField make_conformal_constant(const MetricField& base, double c) { return scale_metric(base, c); }

std::pair<MetricField, MetricField> make_scaled_pair(const MetricField& g, const MetricField& g0,
                                                     double lambda) {
  return {scale_metric(g, lambda), scale_metric(g0, lambda)};
}

MetricField make_oscillation(const Domain& base, int j) {
  if (j < 1) throw Error(ErrorCode::BadSchedule, "sequence index must be >= 1");
  const Mesh& mesh = *base.mesh;
  const int n = mesh.dimension();
  const int res = base.resolution;
  const int width = std::max(1, static_cast<int>(std::lround(static_cast<double>(res) / (2.0 * j))));
  std::vector<Matrix> cells;
  cells.reserve(static_cast<std::size_t>(mesh.num_cells()));
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const Vector b = barycenter(mesh.cell(c), n);
    int parity = 0;
    for (int d = 0; d < n; ++d) {
      const int cube = std::clamp(static_cast<int>(std::floor(b[d] * res)), 0, res - 1);
      parity += cube / width;
    }
    const double factor = parity % 2 == 0 ? 0.25 : 4.0;
    cells.push_back(factor * base.metric[c]);
  }
  return MetricField(base.mesh, std::move(cells));
}

SequenceMember make_oscillation_sequence(const Domain& base, int j, double p) {
  MetricField g = make_oscillation(base, j);
  HypothesisReport report = hypothesis_functionals(g, base.metric, p);
  return {j, std::move(g), report};
}

int nearest_vertex(const Mesh& mesh, const std::vector<double>& point) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const Vector& pos = mesh.position(v);
    double d = 0.0;
    for (int k = 0; k < mesh.dimension(); ++k) {
      const double o = pos[k] - point[static_cast<std::size_t>(k)];
      d += o * o;
    }
    if (d < best_d) {
      best_d = d;
      best = v;
    }
  }
  return best;
}

std::vector<std::pair<int, int>> corner_pairs(const Domain& domain) {
  const Mesh& mesh = *domain.mesh;
  const int n = mesh.dimension();
  const double lo = domain.torus ? 0.25 : 0.0;
  const double hi = domain.torus ? 0.75 : 1.0;
  // Corner with bit d of `mask` set sits at `hi` along axis d.
  auto corner = [&](int mask) {
    std::vector<double> pt(static_cast<std::size_t>(n));
    for (int d = 0; d < n; ++d) pt[static_cast<std::size_t>(d)] = (mask >> d) & 1 ? hi : lo;
    return nearest_vertex(mesh, pt);
  };
  const int full = (1 << n) - 1;
  std::vector<std::pair<int, int>> pairs;
  switch (n) {
    case 1:
      pairs.emplace_back(corner(0), corner(1));
      break;
    case 2:
      pairs.emplace_back(corner(0), corner(full));
      pairs.emplace_back(corner(1), corner(2));
      pairs.emplace_back(corner(0), corner(1));
      pairs.emplace_back(corner(0), corner(2));
      break;
    default:
      for (int mask = 0; mask < 4; ++mask) pairs.emplace_back(corner(mask), corner(full ^ mask));
      break;
  }
  return pairs;
}

Generated generate(const FamilySpec& spec) {
  Domain domain = make_flat(spec.dimension, spec.resolution, spec.torus);
  MetricField g0 = domain.metric;
  if (spec.family == "flat") {
    return {domain, g0, g0};
  }
  if (spec.family == "conformal-constant") {
    MetricField g = make_conformal_constant(g0, spec.conformal);
    return {domain, std::move(g), g0};
  }
  if (spec.family == "spike") {
    MetricField g = make_spike(domain, spec.spike.shape(spec.j));
    return {domain, std::move(g), g0};
  }
  if (spec.family == "oscillation") {
    MetricField g = make_oscillation(domain, spec.j);
    return {domain, std::move(g), g0};
  }
  if (spec.family == "scaled") {
    auto [g, g0s] = make_scaled_pair(g0, g0, spec.lambda);
    return {domain, std::move(g), std::move(g0s)};
  }
  throw Error(ErrorCode::BadConfig, "unknown family '" + spec.family + "'");
}

}  // namespace dpmod
