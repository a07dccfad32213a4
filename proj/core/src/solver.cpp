#include "dpmod/solver.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dpmod/parallel.hpp"

namespace dpmod {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kActiveThreshold = 1e-4;
constexpr double kPsiNoise = 1e-14;
// Newton decrement^2 below which a stage that hit the round-off floor still
// counts as centred; the gap bound then carries the off-centre correction.
constexpr double kStallDecrement = 1e-2;
// Linear slacks keep at least this share of their value after a step.
constexpr double kKeepSlack = 0.01;

void validate_exponent(double p, int n) {
  if (!(p > n)) {
    throw Error(ErrorCode::BadExponent, "p = " + std::to_string(p) + " must exceed n = " + std::to_string(n));
  }
  if (p > kMaxExponent) {
    throw Error(ErrorCode::BadExponent, "p = " + std::to_string(p) + " exceeds the cap of 128");
  }
}

/// Per-cell map from vertex values to z_c = w_c^{1/p} L_c^{-1} df, where
/// G = L L^T and w_c = sqrt(det G) |c|, so that the cell energy is |z_c|^p.
struct CellTerm {
  std::array<int, kMaxDim + 1> vertices{};
  int size = 0;
  Eigen::Matrix<double, kMaxDim, kMaxDim + 1> map = Eigen::Matrix<double, kMaxDim, kMaxDim + 1>::Zero();
};

std::vector<CellTerm> cell_terms(const MetricField& g, double p) {
  const Mesh& mesh = *g.mesh();
  const int n = mesh.dimension();
  std::vector<CellTerm> terms(static_cast<std::size_t>(mesh.num_cells()));
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const Cell& cell = mesh.cell(c);
    CellTerm& t = terms[static_cast<std::size_t>(c)];
    t.vertices = cell.vertices;
    t.size = n + 1;
    const Eigen::LLT<Matrix> llt(g[c]);
    const double log_weight = 0.5 * std::log(g[c].determinant()) + std::log(cell.volume);
    const Matrix m = std::exp(log_weight / p) * llt.matrixL().solve(cell.gradient);
    t.map.topLeftCorner(n, n + 1) = m;
  }
  return terms;
}

/// Iterate of the lifted program: vertex values f (f(y) = 0) and one energy
/// budget s_c per cell.
struct Iterate {
  Eigen::VectorXd f;
  Eigen::VectorXd s;
};

/// Self-concordant barrier of the lifted feasible set
///   |z_c|^p <= s_c,  sum_c s_c < 1,  |f(u_k) - f(v_k)| < c_k,
/// using for each cell the power-cone barrier
///   -log(s^{2/p} - |z|^2) - (1 - 1/p) log s.
/// The energy ball is the projection of this set onto f.
class BarrierProblem {
 public:
  BarrierProblem(const MetricField& g, const GaugeParams& params, int x, int y)
      : terms_(cell_terms(g, params.p())), p_(params.p()), y_(y), nv_(g.mesh()->num_vertices()) {
    if (params.modified()) {
      bool has_xy = false;
      for (const HolderPair& hp : params.pairs()) {
        caps_.push_back({hp.u, hp.v, params.D() * hp.weight});
        has_xy |= (hp.u == std::min(x, y) && hp.v == std::max(x, y));
      }
      // The endpoint pair always constrains the value, whatever the radius.
      if (!has_xy) caps_.push_back({std::min(x, y), std::max(x, y), params.D() * params.holder_weight(x, y)});
    }
  }

  [[nodiscard]] int num_vertices() const noexcept { return nv_; }
  [[nodiscard]] int num_cells() const noexcept { return static_cast<int>(terms_.size()); }
  /// Barrier parameter: 3 per cell cone, 1 for the budget, 2 per pair.
  [[nodiscard]] double parameter() const noexcept {
    return 3.0 * num_cells() + 1.0 + 2.0 * static_cast<double>(caps_.size());
  }

  [[nodiscard]] Eigen::Vector3d cell_z(const CellTerm& t, const Eigen::VectorXd& f) const {
    Eigen::Vector4d local = Eigen::Vector4d::Zero();
    for (int k = 0; k < t.size; ++k) local[k] = f[t.vertices[static_cast<std::size_t>(k)]];
    return t.map * local;
  }

  /// Budgets that make `f` strictly feasible when its energy is below 1/2.
  [[nodiscard]] Eigen::VectorXd initial_budgets(const Eigen::VectorXd& f) const {
    Eigen::VectorXd s(num_cells());
    const double share = 0.5 / num_cells();
    for (int c = 0; c < num_cells(); ++c) {
      const double q = cell_z(terms_[static_cast<std::size_t>(c)], f).squaredNorm();
      s[c] = std::pow(q, 0.5 * p_) + share;
    }
    return s;
  }

  /// Barrier value; +inf outside the domain.
  [[nodiscard]] double barrier(const Iterate& it) const {
    const double beta = 2.0 / p_;
    const double total = it.s.sum();
    if (!(total < 1.0)) return kInf;
    double value = -std::log1p(-total);
    for (int c = 0; c < num_cells(); ++c) {
      const double s = it.s[c];
      if (!(s > 0.0)) return kInf;
      const double r = std::pow(s, beta) - cell_z(terms_[static_cast<std::size_t>(c)], it.f).squaredNorm();
      if (!(r > 0.0)) return kInf;
      value -= std::log(r) + (1.0 - 1.0 / p_) * std::log(s);
    }
    for (const Cap& cap : caps_) {
      const double d = it.f[cap.u] - it.f[cap.v];
      const double s1 = cap.bound - d;
      const double s2 = cap.bound + d;
      if (!(s1 > 0.0) || !(s2 > 0.0)) return kInf;
      value -= std::log(s1) + std::log(s2);
    }
    return value;
  }

  /// Largest step keeping every linear slack (budgets, their sum, pairs)
  /// above `keep` times its current value.
  [[nodiscard]] double max_linear_step(const Iterate& it, const Iterate& dir, double keep) const {
    double alpha = kInf;
    for (int c = 0; c < num_cells(); ++c) {
      if (dir.s[c] < 0.0) alpha = std::min(alpha, it.s[c] / -dir.s[c]);
    }
    const double ds = dir.s.sum();
    if (ds > 0.0) alpha = std::min(alpha, (1.0 - it.s.sum()) / ds);
    for (const Cap& cap : caps_) {
      const double d = it.f[cap.u] - it.f[cap.v];
      const double dd = dir.f[cap.u] - dir.f[cap.v];
      if (dd > 0.0) alpha = std::min(alpha, (cap.bound - d) / dd);
      if (dd < 0.0) alpha = std::min(alpha, (cap.bound + d) / -dd);
    }
    return (1.0 - keep) * alpha;
  }

  /// Newton system of -t f(x) + barrier with the budgets eliminated. Writing
  /// the Hessian as [[A, B], [B^T, S]] with S = diag(h_ss) + gamma 1 1^T, the
  /// reduced matrix K = A - B S^-1 B^T is assembled per cell in closed form
  /// plus one rank-one term.
  class Newton {
   public:
    Newton(const BarrierProblem& pb, const Iterate& it, double t, int x) : pb_(pb) {
      const int nv = pb.nv_;
      const int nc = pb.num_cells();
      const double p = pb.p_;
      const double beta = 2.0 / p;
      const double tail = 1.0 - 1.0 / p;
      grad_f_.setZero(nv);
      grad_s_.resize(nc);
      h_ss_.resize(nc);
      coupling_.resize(nc);
      Eigen::MatrixXd k = Eigen::MatrixXd::Zero(nv, nv);
      Eigen::VectorXd v = Eigen::VectorXd::Zero(nv);

      const double budget = 1.0 - it.s.sum();
      gamma_ = 1.0 / (budget * budget);
      double inv_sum = 0.0;
      for (int c = 0; c < nc; ++c) {
        const CellTerm& term = pb.terms_[static_cast<std::size_t>(c)];
        const double s = it.s[c];
        const Eigen::Vector3d z = pb.cell_z(term, it.f);
        const double u = std::pow(s, beta);
        const double r = u - z.squaredNorm();
        const double bu = beta * u;
        // Cone-barrier derivatives in (z, s).
        const Eigen::Vector3d g_z = (2.0 / r) * z;
        const double g_s = -bu / (s * r) - tail / s;
        const double q = bu * bu + beta * (1.0 - beta) * u * r + tail * r * r;
        const double h_ss = q / (s * s * r * r);
        const Eigen::Vector3d h_zs = (-2.0 * bu / (s * r * r)) * z;
        // z-block after eliminating s: 2I/r + zz^T (4/r^2)(1 - (beta u)^2 / q).
        const double zz = (4.0 / (r * r)) * (beta * (1.0 - beta) * u * r + tail * r * r) / q;

        const auto& map = term.map;
        const Eigen::Vector4d gf = map.transpose() * g_z;
        const Eigen::Vector4d mz = map.transpose() * z;
        const Eigen::Matrix4d block = (2.0 / r) * (map.transpose() * map) + zz * (mz * mz.transpose());
        const Eigen::Vector4d hc = map.transpose() * h_zs;
        for (int a = 0; a < term.size; ++a) {
          const int va = term.vertices[static_cast<std::size_t>(a)];
          grad_f_[va] += gf[a];
          v[va] += hc[a] / h_ss;
          for (int b = 0; b < term.size; ++b) k(va, term.vertices[static_cast<std::size_t>(b)]) += block(a, b);
        }
        grad_s_[c] = g_s + 1.0 / budget;
        h_ss_[c] = h_ss;
        coupling_[static_cast<std::size_t>(c)] = hc;
        inv_sum += 1.0 / h_ss;
      }
      denom_ = 1.0 + gamma_ * inv_sum;
      k += (gamma_ / denom_) * (v * v.transpose());

      for (const Cap& cap : pb.caps_) {
        const double d = it.f[cap.u] - it.f[cap.v];
        const double s1 = cap.bound - d;
        const double s2 = cap.bound + d;
        const double g1 = 1.0 / s1 - 1.0 / s2;
        const double h = 1.0 / (s1 * s1) + 1.0 / (s2 * s2);
        grad_f_[cap.u] += g1;
        grad_f_[cap.v] -= g1;
        k(cap.u, cap.u) += h;
        k(cap.v, cap.v) += h;
        k(cap.u, cap.v) -= h;
        k(cap.v, cap.u) -= h;
      }
      grad_f_[x] -= t;
      k_ = reduce(k, pb.y_);
      factorize();
    }

    /// Solves H d = rhs for the full (f, s) system.
    [[nodiscard]] Iterate solve(const Eigen::VectorXd& rhs_f, const Eigen::VectorXd& rhs_s) const {
      const Eigen::VectorXd w = apply_s_inverse(rhs_s);
      Eigen::VectorXd r = rhs_f;
      for_cells([&](int c, int va, int a) { r[va] -= coupling_[static_cast<std::size_t>(c)][a] * w[c]; });
      Iterate d;
      d.f = expand(llt_.solve(reduce(r, pb_.y_)), pb_.y_);
      Eigen::VectorXd bt = rhs_s;
      for_cells([&](int c, int va, int a) { bt[c] -= coupling_[static_cast<std::size_t>(c)][a] * d.f[va]; });
      d.s = apply_s_inverse(bt);
      return d;
    }

    [[nodiscard]] Iterate direction() const { return solve(-grad_f_, -grad_s_); }
    [[nodiscard]] double slope(const Iterate& d) const { return grad_f_.dot(d.f) + grad_s_.dot(d.s); }
    [[nodiscard]] const Eigen::VectorXd& grad_f() const noexcept { return grad_f_; }
    [[nodiscard]] const Eigen::VectorXd& grad_s() const noexcept { return grad_s_; }

   private:
    template <class Fn>
    void for_cells(Fn&& fn) const {
      for (int c = 0; c < pb_.num_cells(); ++c) {
        const CellTerm& term = pb_.terms_[static_cast<std::size_t>(c)];
        for (int a = 0; a < term.size; ++a) fn(c, term.vertices[static_cast<std::size_t>(a)], a);
      }
    }

    [[nodiscard]] Eigen::VectorXd apply_s_inverse(const Eigen::VectorXd& y) const {
      const Eigen::VectorXd dy = y.cwiseQuotient(h_ss_);
      const double corr = gamma_ * dy.sum() / denom_;
      return dy - corr * h_ss_.cwiseInverse();
    }

    void factorize() {
      // A diagonal shift guards against round-off indefiniteness.
      const double scale = std::max(k_.diagonal().cwiseAbs().maxCoeff(), 1e-300);
      double shift = 0.0;
      Eigen::MatrixXd shifted = k_;
      for (int attempt = 0; attempt < 30; ++attempt) {
        shifted.diagonal() = k_.diagonal().array() + shift;
        llt_.compute(shifted);
        if (llt_.info() == Eigen::Success) return;
        shift = shift == 0.0 ? 1e-14 * scale : 10.0 * shift;
      }
      throw Error(ErrorCode::NonConverged, "Newton matrix is not positive definite");
    }

    const BarrierProblem& pb_;
    Eigen::VectorXd grad_f_;
    Eigen::VectorXd grad_s_;
    Eigen::VectorXd h_ss_;
    std::vector<Eigen::Vector4d> coupling_;
    double gamma_ = 0.0;
    double denom_ = 1.0;
    Eigen::MatrixXd k_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
  };

 private:
  struct Cap {
    int u;
    int v;
    double bound;
  };

  static Eigen::MatrixXd reduce(const Eigen::MatrixXd& m, int pinned);
  static Eigen::VectorXd reduce(const Eigen::VectorXd& v, int pinned);
  static Eigen::VectorXd expand(const Eigen::VectorXd& r, int pinned);

  std::vector<CellTerm> terms_;
  std::vector<Cap> caps_;
  double p_;
  int y_;
  int nv_;
};

/// Drops row/column `pinned` from the full system.
Eigen::VectorXd BarrierProblem::reduce(const Eigen::VectorXd& v, int pinned) {
  const auto n = v.size();
  Eigen::VectorXd r(n - 1);
  r.head(pinned) = v.head(pinned);
  r.tail(n - 1 - pinned) = v.tail(n - 1 - pinned);
  return r;
}

Eigen::MatrixXd BarrierProblem::reduce(const Eigen::MatrixXd& m, int pinned) {
  const auto n = m.rows();
  const auto tail = n - 1 - pinned;
  Eigen::MatrixXd r(n - 1, n - 1);
  r.topLeftCorner(pinned, pinned) = m.topLeftCorner(pinned, pinned);
  r.topRightCorner(pinned, tail) = m.topRightCorner(pinned, tail);
  r.bottomLeftCorner(tail, pinned) = m.bottomLeftCorner(tail, pinned);
  r.bottomRightCorner(tail, tail) = m.bottomRightCorner(tail, tail);
  return r;
}

Eigen::VectorXd BarrierProblem::expand(const Eigen::VectorXd& r, int pinned) {
  const auto n = r.size() + 1;
  Eigen::VectorXd v(n);
  v.head(pinned) = r.head(pinned);
  v[pinned] = 0.0;
  v.tail(n - 1 - pinned) = r.tail(n - 1 - pinned);
  return v;
}

void validate_pair(int x, int y, const Mesh& mesh, const GaugeParams& params) {
  const int nv = mesh.num_vertices();
  if (x < 0 || y < 0 || x >= nv || y >= nv) {
    throw Error(ErrorCode::BadIndex, "vertex pair (" + std::to_string(x) + ", " + std::to_string(y) + ") out of range");
  }
  if (x == y) throw Error(ErrorCode::SameVertex, "x = y = " + std::to_string(x));
  if (params.background_distances().size() != nv) {
    throw Error(ErrorCode::MeshMismatch, "background distances do not match the mesh");
  }
  if (!(params.background_distances()(x, y) > 0.0)) {
    throw Error(ErrorCode::ZeroDistancePair, "d_g0(x, y) = 0");
  }
}

DistanceResult run_barrier(int x, int y, const MetricField& g, const GaugeParams& params,
                           const SolverOptions& options) {
  const Mesh& mesh = *g.mesh();
  validate_pair(x, y, mesh, params);
  const BarrierProblem problem(g, params, x, y);
  const int nv = problem.num_vertices();
  const DistanceMatrix& d0 = params.background_distances();
  const double t_exp = params.exponent();

  // Start: f0(v) = min(1, d0(v,y)^t / d0(x,y)^t). It is H-bounded by the
  // snowflake inequality; scaling it to gauge 1/2 makes it strictly feasible.
  Eigen::VectorXd f(nv);
  const double ref = std::pow(d0(x, y), t_exp);
  for (int v = 0; v < nv; ++v) f[v] = std::min(1.0, std::pow(d0(v, y), t_exp) / ref);
  f[y] = 0.0;
  {
    const FunctionField ff(f.data(), f.data() + nv);
    const double phi = gauge(ff, g, params);
    if (!(phi > 0.0) || !std::isfinite(phi)) {
      throw Error(ErrorCode::InfeasibleNormalization, "initial gauge " + std::to_string(phi));
    }
    f *= 0.5 / phi;
  }

  const double m = problem.parameter();
  Iterate it{f, problem.initial_budgets(f)};

  // First weight: the t that makes the start as central as possible, i.e.
  // minimizes the Newton decrement of -t e_x + grad B over t.
  double t = m / f[x];
  {
    const BarrierProblem::Newton newton(problem, it, 0.0, x);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(nv);
    e[x] = 1.0;
    const Eigen::VectorXd zero_s = Eigen::VectorXd::Zero(problem.num_cells());
    const Iterate he = newton.solve(e, zero_s);
    const Iterate hg = newton.solve(newton.grad_f(), newton.grad_s());
    const double ehe = he.f[x];
    const double t_fit = ehe > 0.0 ? hg.f[x] / ehe : 0.0;
    if (t_fit > 0.0 && std::isfinite(t_fit)) t = t_fit;
  }

  // Suboptimality bound for an iterate with Newton decrement lambda < 1 on a
  // barrier with parameter m.
  double lambda = 0.0;
  auto gap_bound = [&] { return (m + (lambda + std::sqrt(m)) * lambda / (1.0 - lambda)) / t; };

  int iterations = 0;
  bool converged = false;
  bool exhausted = false;
  while (!exhausted) {
    // Centering by damped Newton.
    bool centred = false;
    lambda = 0.0;
    while (!centred) {
      if (iterations >= options.max_iterations) {
        exhausted = true;
        break;
      }
      ++iterations;
      const BarrierProblem::Newton newton(problem, it, t, x);
      const Iterate dir = newton.direction();
      const double slope = newton.slope(dir);
      const double decrement = -slope;
      if (!(decrement > 2.0 * options.centering_tolerance)) {
        centred = true;
        break;
      }

      const double b0 = problem.barrier(it);
      double alpha = std::min(1.0, problem.max_linear_step(it, dir, kKeepSlack));
      bool moved = false;
      for (int ls = 0; ls < 80; ++ls) {
        Iterate trial{it.f + alpha * dir.f, it.s + alpha * dir.s};
        const double b1 = problem.barrier(trial);
        // psi(trial) - psi(it), accumulated without forming t f(x).
        const double change = -t * alpha * dir.f[x] + (b1 - b0);
        if (std::isfinite(b1) && change <= 0.25 * alpha * slope) {
          // A decrease below the evaluation noise of psi means the centre is
          // resolved as far as double precision allows.
          moved = -change > kPsiNoise * (t * std::abs(it.f[x]) + std::abs(b0) + 1.0);
          it = std::move(trial);
          break;
        }
        alpha *= 0.5;
      }
      if (!moved) {
        centred = decrement <= kStallDecrement;
        lambda = std::sqrt(decrement);
        if (!centred) exhausted = true;
        break;
      }
    }
    if (exhausted) break;
    if (gap_bound() <= options.gap_tolerance * it.f[x]) {
      converged = true;
      break;
    }
    t *= options.barrier_growth;
  }
  f = it.f;

  const FunctionField raw(f.data(), f.data() + nv);
  const double phi = gauge(raw, g, params);
  DistanceResult result;
  result.x = x;
  result.y = y;
  result.p = params.p();
  result.D = params.D();
  result.pair_radius = params.pair_radius();
  result.iterations = iterations;
  result.extremal.resize(static_cast<std::size_t>(nv));
  for (int v = 0; v < nv; ++v) result.extremal[static_cast<std::size_t>(v)] = raw[static_cast<std::size_t>(v)] / phi;
  result.value = std::abs(result.extremal[static_cast<std::size_t>(x)] - result.extremal[static_cast<std::size_t>(y)]);
  result.gauge = 1.0 / result.value;
  result.energy = energy_p(result.extremal, g, params.p());
  result.energy_residual = std::max(0.0, result.energy - 1.0);
  const double energy_term = std::pow(result.energy, 1.0 / params.p());
  double holder_term = 0.0;
  if (params.modified()) {
    result.holder = holder_seminorm(result.extremal, params);
    result.holder_residual = std::max(0.0, result.holder / params.D() - 1.0);
    holder_term = result.holder / params.D();
  }
  const bool energy_active = energy_term >= 1.0 - kActiveThreshold;
  const bool holder_active = holder_term >= 1.0 - kActiveThreshold;
  result.active = energy_active && holder_active ? ActiveConstraint::Both
                  : holder_active               ? ActiveConstraint::Holder
                                                : ActiveConstraint::Energy;
  result.relative_gap = gap_bound() / std::max(f[x], 1e-300);
  result.converged = converged;
  if (!converged) throw NonConvergedError(std::move(result));
  return result;
}

}  // namespace

std::string_view to_string(ActiveConstraint a) noexcept {
  switch (a) {
    case ActiveConstraint::Energy: return "energy";
    case ActiveConstraint::Holder: return "holder";
    case ActiveConstraint::Both: return "both";
  }
  return "unknown";
}

GaugeParams::GaugeParams(const MetricField& g0, double p, double D, double pair_radius)
    : GaugeParams(std::make_shared<const DistanceMatrix>(all_pairs_distances(g0, "g0")),
                  g0.mesh()->dimension(), p, D, pair_radius) {}

GaugeParams::GaugeParams(std::shared_ptr<const DistanceMatrix> background, int dimension, double p,
                         double D, double pair_radius)
    : d0_(std::move(background)), n_(dimension), p_(p), D_(D), radius_(pair_radius) {
  if (!d0_) throw Error(ErrorCode::MeshMismatch, "missing background distances");
  validate_exponent(p, n_);
  if (!(D > 0.0)) throw Error(ErrorCode::NonpositiveScale, "D = " + std::to_string(D) + " must be positive");
  if (!(pair_radius > 0.0)) throw Error(ErrorCode::BadConfig, "pair radius must be positive");
  t_ = (p - n_) / p;
  if (!modified()) return;
  const int nv = d0_->size();
  for (int u = 0; u < nv; ++u) {
    for (int v = u + 1; v < nv; ++v) {
      const double d = (*d0_)(u, v);
      if (!(d > 0.0)) {
        throw Error(ErrorCode::ZeroDistancePair, "d_g0(" + std::to_string(u) + ", " + std::to_string(v) + ") = 0");
      }
      if (d <= radius_) pairs_.push_back({u, v, std::pow(d, t_)});
    }
  }
}

double GaugeParams::holder_weight(int u, int v) const { return std::pow((*d0_)(u, v), t_); }

GaugeParams GaugeParams::with(double p, double D) const { return GaugeParams(d0_, n_, p, D, radius_); }

double energy_p(std::span<const double> f, const MetricField& g, double p) {
  const Mesh& mesh = *g.mesh();
  if (!(p > 1.0)) throw Error(ErrorCode::BadExponent, "energy needs p > 1");
  if (static_cast<int>(f.size()) != mesh.num_vertices()) {
    throw Error(ErrorCode::MeshMismatch, "function size does not match the mesh");
  }
  double total = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const Vector df = mesh.cell_gradient(c, f);
    const double q = df.dot(Eigen::LLT<Matrix>(g[c]).solve(df));
    total += std::pow(std::max(q, 0.0), 0.5 * p) * std::sqrt(g[c].determinant()) * mesh.cell_euclidean_volume(c);
  }
  return total;
}

double holder_seminorm(std::span<const double> f, const GaugeParams& params) {
  if (params.pairs().empty()) throw Error(ErrorCode::BadConfig, "empty Hoelder pair set");
  if (static_cast<int>(f.size()) != params.background_distances().size()) {
    throw Error(ErrorCode::MeshMismatch, "function size does not match the pair set");
  }
  double best = 0.0;
  for (const HolderPair& hp : params.pairs()) {
    if (!(hp.weight > 0.0)) throw Error(ErrorCode::ZeroDistancePair, "pair with zero distance");
    best = std::max(best, std::abs(f[static_cast<std::size_t>(hp.u)] - f[static_cast<std::size_t>(hp.v)]) / hp.weight);
  }
  return best;
}

double gauge(std::span<const double> f, const MetricField& g, const GaugeParams& params) {
  const double energy_term = std::pow(energy_p(f, g, params.p()), 1.0 / params.p());
  if (!params.modified()) return energy_term;
  return std::max(energy_term, holder_seminorm(f, params) / params.D());
}

DistanceResult solve_dp(int x, int y, const MetricField& g, const MetricField& g0,
                        const GaugeParams& params, const SolverOptions& options) {
  if (g.mesh() != g0.mesh()) throw Error(ErrorCode::MeshMismatch, "g and g0 live on different meshes");
  return run_barrier(x, y, g, params, options);
}

DistanceResult solve_dp_unmodified(int x, int y, const MetricField& g, const GaugeParams& params,
                                   const SolverOptions& options) {
  return run_barrier(x, y, g, params.with(params.p(), kInf), options);
}

std::vector<PairOutcome> distance_matrix(std::span<const std::pair<int, int>> pairs,
                                         const MetricField& g, const MetricField& g0,
                                         const GaugeParams& params, const SolverOptions& options) {
  std::vector<PairOutcome> out(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t i) {
    PairOutcome& o = out[i];
    o.x = pairs[i].first;
    o.y = pairs[i].second;
    try {
      o.result = solve_dp(o.x, o.y, g, g0, params, options);
    } catch (const NonConvergedError& e) {
      o.result = e.diagnostics();
      o.error = e.code();
      o.message = e.what();
    } catch (const Error& e) {
      o.error = e.code();
      o.message = e.what();
    }
  });
  return out;
}

}  // namespace dpmod
