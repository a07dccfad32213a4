#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dpmod/error.hpp"
#include "dpmod/geodesic.hpp"
#include "dpmod/metric.hpp"

namespace dpmod {

/// One real value per manifold vertex; the piecewise-linear test function f.
using FunctionField = std::vector<double>;

inline constexpr double kMaxExponent = 128.0;

/// A constrained vertex pair of the Hoelder seminorm with its precomputed
/// denominator d_{g0}(u, v)^t.
struct HolderPair {
  int u;
  int v;
  double weight;
};

/// Constraint data of the modified distance: exponent p, dimension n, Hoelder
/// bound D (infinite for the unmodified distance), t = (p - n)/p and the pair
/// set with its background distances.
class GaugeParams {
 public:
  static constexpr double kAllPairs = std::numeric_limits<double>::infinity();

  /// Computes d_{g0} on the mesh graph. `pair_radius` restricts the Hoelder
  /// pairs to d_{g0}(u, v) <= radius; the default keeps every vertex pair.
  GaugeParams(const MetricField& g0, double p, double D, double pair_radius = kAllPairs);
  GaugeParams(std::shared_ptr<const DistanceMatrix> background, int dimension, double p, double D,
              double pair_radius = kAllPairs);

  [[nodiscard]] double p() const noexcept { return p_; }
  [[nodiscard]] int dimension() const noexcept { return n_; }
  [[nodiscard]] double D() const noexcept { return D_; }
  /// Hoelder exponent (p - n)/p.
  [[nodiscard]] double exponent() const noexcept { return t_; }
  [[nodiscard]] bool modified() const noexcept { return D_ < std::numeric_limits<double>::infinity(); }
  [[nodiscard]] double pair_radius() const noexcept { return radius_; }
  [[nodiscard]] const std::vector<HolderPair>& pairs() const noexcept { return pairs_; }
  [[nodiscard]] const DistanceMatrix& background_distances() const noexcept { return *d0_; }
  [[nodiscard]] const std::shared_ptr<const DistanceMatrix>& background_ptr() const noexcept { return d0_; }
  /// d_{g0}(u, v)^t
  [[nodiscard]] double holder_weight(int u, int v) const;

  /// Same background distances and pair radius with a different p or D.
  [[nodiscard]] GaugeParams with(double p, double D) const;

 private:
  std::shared_ptr<const DistanceMatrix> d0_;
  int n_ = 0;
  double p_ = 0.0;
  double D_ = 0.0;
  double t_ = 0.0;
  double radius_ = kAllPairs;
  std::vector<HolderPair> pairs_;
};

enum class ActiveConstraint { Energy, Holder, Both };
std::string_view to_string(ActiveConstraint a) noexcept;

struct DistanceResult {
  int x = 0;
  int y = 0;
  double p = 0.0;
  double D = 0.0;
  /// d^D_{p,g,g0}(x, y) = |f(x) - f(y)| of the extremal below.
  double value = 0.0;
  /// Extremal normalized to gauge 1 (E_p <= 1 and H <= D), f(y) = 0.
  FunctionField extremal;
  ActiveConstraint active = ActiveConstraint::Energy;
  int iterations = 0;
  /// Gauge of the minimizer under the normalization f(x) - f(y) = 1, i.e. 1/value.
  double gauge = 0.0;
  double energy = 0.0;           ///< E_p of the extremal
  double holder = 0.0;           ///< H of the extremal (0 for the unmodified distance)
  double energy_residual = 0.0;  ///< max(0, E_p - 1)
  double holder_residual = 0.0;  ///< max(0, H/D - 1)
  /// Suboptimality bound of the barrier method at exit, relative to the value.
  double relative_gap = 0.0;
  double pair_radius = GaugeParams::kAllPairs;
  bool converged = false;
};

/// Thrown when the interior-point iteration exhausts its budget; carries the
/// best iterate so callers can still report diagnostics.
class NonConvergedError : public Error {
 public:
  explicit NonConvergedError(DistanceResult diagnostics)
      : Error(ErrorCode::NonConverged, "solver did not reach the requested gap"),
        diagnostics_(std::move(diagnostics)) {}
  [[nodiscard]] const DistanceResult& diagnostics() const noexcept { return diagnostics_; }

 private:
  DistanceResult diagnostics_;
};

struct SolverOptions {
  /// Stop once the barrier gap bound (about m/t) falls below this fraction of
  /// the value.
  double gap_tolerance = 1e-6;
  /// t multiplier between centering stages.
  double barrier_growth = 16.0;
  /// Newton decrement lambda^2/2 that ends a centering stage.
  double centering_tolerance = 1e-11;
  /// Total Newton iterations over all stages.
  int max_iterations = 1500;
};

/// sum_c (df^T G^-1 df)^{p/2} sqrt(det G) |c|.
double energy_p(std::span<const double> f, const MetricField& g, double p);

/// max over the pair set of |f(u) - f(v)| / d_{g0}(u, v)^t.
double holder_seminorm(std::span<const double> f, const GaugeParams& params);

/// max(E_p(f)^{1/p}, H(f)/D); the energy term alone when D is infinite.
double gauge(std::span<const double> f, const MetricField& g, const GaugeParams& params);

/// d^D_{p,g,g0}(x, y): sup |f(x) - f(y)| over piecewise-linear f with
/// E_p(f) <= 1 and H(f) <= D, by a log-barrier interior-point method on
/// max f(x) subject to f(y) = 0. The energy ball is lifted to per-cell power
/// cones |z_c|^p <= s_c with sum_c s_c <= 1, which keeps the barrier
/// self-concordant for every p.
DistanceResult solve_dp(int x, int y, const MetricField& g, const MetricField& g0,
                        const GaugeParams& params, const SolverOptions& options = {});

/// The unmodified d_{p,g}: same program without the Hoelder constraint.
DistanceResult solve_dp_unmodified(int x, int y, const MetricField& g, const GaugeParams& params,
                                   const SolverOptions& options = {});

struct PairOutcome {
  int x = 0;
  int y = 0;
  std::optional<DistanceResult> result;
  std::optional<ErrorCode> error;
  std::string message;
};

/// One solve per pair, run concurrently and returned in input order. Per-pair
/// failures (SameVertex, NonConverged, ...) are recorded, never thrown; a
/// NonConverged outcome keeps its diagnostics in `result`.
std::vector<PairOutcome> distance_matrix(std::span<const std::pair<int, int>> pairs,
                                         const MetricField& g, const MetricField& g0,
                                         const GaugeParams& params,
                                         const SolverOptions& options = {});

}  // namespace dpmod
