#pragma once

#include <span>
#include <vector>

#include "dpmod/metric.hpp"
#include "dpmod/solver.hpp"

namespace dpmod {

inline constexpr int kOracleMaxVertices = 6;

struct BruteForceResult {
  /// Best feasible f(x) found with f(y) = 0; a lower bound on d^D.
  double value = 0.0;
  /// Grid pitch of the last refinement round.
  double pitch = 0.0;
  /// The feasible function that attains `value`.
  FunctionField point;
};

/// Grid search for d^D on tiny meshes: levels of f(x) are scanned downward
/// and the first level with a feasible completion wins. Candidates are
/// accepted only when `energy_p` <= 1 and `holder_seminorm` <= D, so the
/// reported value is always attained. Coarse pitch B/50 with
/// B = D * max_pairs d_g0^t, then three rounds of pitch/10 that climb from
/// the least-energy completion at the incumbent level. Requires a finite D. Throws Error{TooManyVertices} above six
/// vertices.
BruteForceResult brute_force_dp(int x, int y, const MetricField& g, const MetricField& g0,
                                const GaugeParams& params);

struct Analytic1DResult {
  double value = 0.0;
  /// The Hoelder bound between the endpoints decides the value.
  bool cap_active = false;
  /// Neither closed-form candidate is feasible: some interior pair binds and
  /// `value` is only an upper bound.
  bool interior_binding = false;
};

/// Closed form on a chain of cells with length densities `a` (g = a^2 dx^2),
/// background densities `a0` and chart lengths `lengths`, between its two
/// ends.
///
/// Maximizing int f' subject to int |f'|^p a^(1-p) <= 1 gives the Lagrange
/// condition f' = c a, hence d = (int a)^((p-1)/p); piecewise-linear f
/// realizes it exactly because a is constant per cell. With a finite D the
/// endpoint pair caps the value at D L0^t (L0 = int a0, t = (p-1)/p); the
/// candidate f' proportional to a0 attains the cap, satisfies every pair
/// bound, and is accepted when its energy is <= 1.
Analytic1DResult analytic_1d_dp(std::span<const double> a, std::span<const double> lengths, double p,
                                double D, std::span<const double> a0);

/// Same for vertices x, y of a 1-D mesh without identifications; the cells
/// strictly between x and y are extracted from g and g0. Throws
/// Error{NotOneDimensional}.
Analytic1DResult analytic_1d_dp(int x, int y, const MetricField& g, const MetricField& g0, double p,
                                double D);

}  // namespace dpmod
