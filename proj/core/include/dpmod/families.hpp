#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dpmod/metric.hpp"

namespace dpmod {

/// A generated background: the unit box [0,1]^n or the unit flat torus,
/// triangulated with `resolution` cells per axis, carrying G = I.
struct Domain {
  MeshPtr mesh;
  MetricField metric;
  int resolution = 0;
  bool torus = false;
};

/// Freudenthal (Kuhn) triangulation of the unit box or torus: n! simplices
/// per grid cube. Throws Error{BadDimension} unless 1 <= n <= 3 and
/// Error{BadConfig} for fewer than 2 cells per axis.
Domain make_flat(int n, int resolution, bool torus);

enum class SpikeProfile {
  Point,  ///< distance to the centre
  Tube,   ///< distance to the axis through the centre along the last coordinate
};

/// Conformal spike g = phi^2 g0, phi = 1 + A max(0, 1 - dist/r), evaluated at
/// cell barycentres; distances wrap around on a torus.
struct SpikeShape {
  double amplitude = 1.0;
  double radius = 0.25;
  std::vector<double> center;  ///< defaults to the box midpoint
  SpikeProfile profile = SpikeProfile::Point;
};

/// Member j of the default sequence: A_j = amplitude_scale * j,
/// r_j = radius_scale * j^-(1 + epsilon).
struct SpikeSchedule {
  double amplitude_scale = 2.0;
  double radius_scale = 0.49;
  double epsilon = 0.0;
  std::vector<double> center;
  SpikeProfile profile = SpikeProfile::Point;

  /// Defaults per dimension; n = 3 uses the tube (drawstring-like) profile.
  static SpikeSchedule defaults(int n);
  [[nodiscard]] SpikeShape shape(int j) const;
};

struct SequenceMember {
  int j = 0;
  MetricField metric;
  HypothesisReport report;
};

/// Throws Error{BadSchedule} for A < 0, r <= 0 or r >= 1/2 (half the extent).
MetricField make_spike(const Domain& base, const SpikeShape& shape);

/// make_spike with the schedule's member j plus its hypothesis integrals at
/// exponent p. Throws Error{BadSchedule} for j < 1.
SequenceMember make_spike_sequence(const Domain& base, const SpikeSchedule& schedule, int j, double p);

/// G -> c^2 G. Throws Error{NonpositiveScale}.
MetricField make_conformal_constant(const MetricField& base, double c);

/// (lambda^2 g, lambda^2 g0). Throws Error{NonpositiveScale}.
std::pair<MetricField, MetricField> make_scaled_pair(const MetricField& g, const MetricField& g0,
                                                     double lambda);

/// Checkerboard of I/4 and 4I over blocks of w = max(1, round(N / 2j)) grid
/// cubes per axis; a simplex takes the value of the cube holding its
/// barycentre. Throws Error{BadSchedule} for j < 1.
MetricField make_oscillation(const Domain& base, int j);
SequenceMember make_oscillation_sequence(const Domain& base, int j, double p);

/// Vertex nearest to a chart point (ties to the smaller index).
int nearest_vertex(const Mesh& mesh, const std::vector<double>& point);

/// Fixed far-apart vertex pairs. On a box the points are the corners of
/// [0,1]^n, on a torus the corners of [1/4,3/4]^n. n = 1: the two ends;
/// n = 2: both diagonals and the two sides through the first corner;
/// n = 3: the four main diagonals.
std::vector<std::pair<int, int>> corner_pairs(const Domain& domain);

/// Parameters of a generator call, as recorded in provenance output.
struct FamilySpec {
  std::string family = "flat";  ///< flat | conformal-constant | spike | oscillation | scaled
  int dimension = 2;
  int resolution = 8;
  bool torus = true;
  int j = 1;
  double conformal = 1.0;
  double lambda = 1.0;
  SpikeSchedule spike = SpikeSchedule::defaults(2);
};

/// Builds the background domain and the family member g described by `spec`
/// (for "scaled" the background metric is scaled too).
struct Generated {
  Domain domain;
  MetricField g;
  MetricField g0;
};
Generated generate(const FamilySpec& spec);

}  // namespace dpmod
