// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dpmod/error.hpp"
#include "dpmod/families.hpp"
#include "dpmod/format.hpp"
#include "dpmod/geodesic.hpp"
#include "dpmod/metric.hpp"
#include "dpmod/oracle.hpp"
#include "dpmod/solver.hpp"
#include "dpmod_tools/config.hpp"
#include "dpmod_tools/experiment.hpp"
#include "test_support.hpp"

namespace {

using namespace dpmod;
namespace fs = std::filesystem;
using test::Rng;

struct Verdict {
  bool pass = true;
  std::string detail;
};

std::string num(double v) { return format_double(v, 3); }

const fs::path kConfigDir = DPMOD_CONFIG_DIR;

/// Records the first failure message; later ones only count.
class Tally {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    if (failures_++ == 0) first_ = what;
  }
  Verdict verdict(const std::string& summary) const {
    if (failures_ == 0) return {true, summary};
    return {false, summary + "; " + std::to_string(failures_) + " failure(s), first: " + first_};
  }

 private:
  int failures_ = 0;
  std::string first_;
};

std::vector<Matrix> random_cells(Rng& rng, const Mesh& mesh, double max_condition) {
  std::vector<Matrix> cells;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    cells.push_back(test::random_spd(rng, mesh.dimension(), max_condition, 0.5));
  }
  return cells;
}

std::vector<double> random_lengths(Rng& rng, int cells) {
  std::vector<double> out;
  for (int c = 0; c < cells; ++c) out.push_back(test::uniform(rng, 0.3, 1.0));
  return out;
}

/// Small planar templates with 4, 5 and 6 vertices, corners jittered.
MeshPtr jittered_planar(Rng& rng, int vertices) {
  std::vector<Point> pts;
  std::vector<CellIndices> cells;
  if (vertices == 4) {
    pts = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    cells = {{0, 1, 2}, {0, 2, 3}};
  } else if (vertices == 5) {
    pts = {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}};
    cells = {{0, 1, 4}, {1, 2, 4}, {2, 3, 4}, {3, 0, 4}};
  } else {
    pts = {{0, 0}, {1, 0}, {2, 0}, {0, 1}, {1, 1}, {2, 1}};
    cells = {{0, 1, 4}, {0, 4, 3}, {1, 2, 5}, {1, 5, 4}};
  }
  for (Point& p : pts) {
    for (double& x : p) x += test::uniform(rng, -0.15, 0.15);
  }
  return build_mesh(std::move(pts), std::move(cells));
}

std::pair<int, int> random_pair(Rng& rng, int nv) {
  const int x = test::uniform_int(rng, 0, nv - 1);
  int y = test::uniform_int(rng, 0, nv - 2);
  if (y >= x) ++y;
  return {x, y};
}

double relative(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

// 1. d on (lambda^2 g, lambda^2 g0) equals lambda^t d on (g, g0) with D fixed.
Verdict scaling_law() {
  Rng rng(101);
  Tally tally;
  double worst = 0.0;
  struct Case {
    MetricField g;
    MetricField g0;
    std::vector<std::pair<int, int>> pairs;
  };
  std::vector<Case> cases;
  {
    const MeshPtr m = test::uniform_chain(32);
    std::vector<double> a;
    for (int c = 0; c < 32; ++c) a.push_back(test::uniform(rng, 0.5, 3.0));
    cases.push_back({test::density_metric(m, a), MetricField::identity(m), {{0, 32}, {5, 20}}});
  }
  {
    const Domain torus = make_flat(2, 8, true);
    MetricField g(torus.mesh, random_cells(rng, *torus.mesh, 10.0));
    auto pairs = corner_pairs(torus);
    pairs.resize(2);
    cases.push_back({std::move(g), torus.metric, std::move(pairs)});
  }
  for (const Case& cs : cases) {
    const int n = cs.g.mesh()->dimension();
    for (double p : {4.0, 8.0}) {
      const double D = tools::default_D(cs.g, cs.g0, p);
      const GaugeParams base(cs.g0, p, D);
      for (double lambda : {0.5, 1.0, 2.0, 4.0}) {
        const MetricField gl = scale_metric(cs.g, lambda);
        const MetricField g0l = scale_metric(cs.g0, lambda);
        const GaugeParams scaled(g0l, p, D);
        for (const auto& [x, y] : cs.pairs) {
          const double rhs = solve_dp(x, y, cs.g, cs.g0, base).value;
          const double lhs = solve_dp(x, y, gl, g0l, scaled).value;
          const double err = std::abs(lhs - std::pow(lambda, (p - n) / p) * rhs) / lhs;
          worst = std::max(worst, err);
          tally.expect(err <= 1e-4, "n=" + std::to_string(n) + " p=" + num(p) + " lambda=" + num(lambda) +
                                        " rel err " + num(err));
        }
      }
    }
  }
  return tally.verdict("max rel err " + num(worst) + " (limit 1e-4)");
}

// 2. Every solved value respects the Hoelder cap D d_g0(x, y)^t.
Verdict holder_cap() {
  Rng rng(202);
  Tally tally;
  int capped = 0;
  double worst = -1e300;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 2;
    MeshPtr mesh;
    if (n == 1) {
      mesh = test::chain(random_lengths(rng, test::uniform_int(rng, 4, 12)));
    } else {
      mesh = make_flat(2, test::uniform_int(rng, 2, 4), false).mesh;
    }
    const MetricField g(mesh, random_cells(rng, *mesh, 100.0));
    const MetricField g0(mesh, random_cells(rng, *mesh, 100.0));
    const double ps[] = {n + 1.0, 2.0 * n + 1.0, 3.0 * n + 1.0, 8.0};
    const double p = ps[test::uniform_int(rng, 0, 3)];
    const double D = tools::default_D(g, g0, p) * test::uniform(rng, 0.05, 1.2);
    const GaugeParams params(g0, p, D);
    const auto [x, y] = random_pair(rng, mesh->num_vertices());
    const DistanceResult r = solve_dp(x, y, g, g0, params);
    const double cap = D * params.holder_weight(x, y);
    worst = std::max(worst, r.value - cap);
    if (r.value > 0.99 * cap) ++capped;
    tally.expect(r.converged, "trial " + std::to_string(trial) + " did not converge");
    tally.expect(r.value <= cap + 1e-6, "trial " + std::to_string(trial) + " value " + num(r.value) +
                                            " above cap " + num(cap));
  }
  return tally.verdict("200 instances, " + std::to_string(capped) + " at the cap, max(value - cap) " +
                       num(worst) + " (limit 1e-6)");
}

// 3. Interior-point solver against the exhaustive grid oracle.
Verdict oracle_equivalence() {
  Rng rng(303);
  Tally tally;
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 2;
    MeshPtr mesh;
    double p = 0.0;
    if (n == 1) {
      mesh = test::chain(random_lengths(rng, test::uniform_int(rng, 1, 5)));
      p = std::vector<double>{2, 3, 5}[static_cast<std::size_t>(test::uniform_int(rng, 0, 2))];
    } else {
      mesh = jittered_planar(rng, test::uniform_int(rng, 4, 6));
      p = std::vector<double>{3, 4, 7}[static_cast<std::size_t>(test::uniform_int(rng, 0, 2))];
    }
    const MetricField g(mesh, random_cells(rng, *mesh, 10.0));
    const MetricField g0(mesh, random_cells(rng, *mesh, 4.0));
    const double D = tools::default_D(g, g0, p) * test::uniform(rng, 0.3, 1.5);
    const GaugeParams params(g0, p, D);
    const auto [x, y] = random_pair(rng, mesh->num_vertices());
    const double solved = solve_dp(x, y, g, g0, params).value;
    const double brute = brute_force_dp(x, y, g, g0, params).value;
    const double err = relative(solved, brute);
    worst = std::max(worst, err);
    tally.expect(err <= 0.01, "trial " + std::to_string(trial) + " solver " + num(solved) + " oracle " +
                                  num(brute));
  }
  return tally.verdict("50 meshes, max rel diff " + num(worst) + " (limit 1e-2)");
}

// 4. 64-cell interval against the closed forms, free and capped.
Verdict analytic_1d() {
  Tally tally;
  double worst = 0.0;
  const MeshPtr mesh = test::uniform_chain(64);
  const MetricField g0 = MetricField::identity(mesh);
  std::vector<std::pair<std::string, std::vector<double>>> densities;
  densities.emplace_back("a=1", std::vector<double>(64, 1.0));
  densities.emplace_back("a=2", std::vector<double>(64, 2.0));
  std::vector<double> piecewise(64, 1.0);
  std::fill(piecewise.begin() + 32, piecewise.end(), 3.0);
  densities.emplace_back("a=(1,3)", piecewise);
  for (const auto& [name, a] : densities) {
    const MetricField g = test::density_metric(mesh, a);
    double mass = 0.0;
    for (double v : a) mass += v / 64.0;
    for (double p : {2.0, 4.0, 8.0}) {
      const std::string tag = name + " p=" + num(p);
      const double free_value = std::pow(mass, (p - 1) / p);
      const double large = 1e6;
      const double solved = solve_dp(0, 64, g, g0, GaugeParams(g0, p, large)).value;
      worst = std::max(worst, relative(solved, free_value));
      tally.expect(relative(solved, free_value) <= 0.02, tag + " free: " + num(solved) + " vs " + num(free_value));

      const double D = 0.3 * free_value;
      const Analytic1DResult exact = analytic_1d_dp(0, 64, g, g0, p, D);
      tally.expect(exact.cap_active, tag + " capped case is not cap-feasible");
      const double capped = solve_dp(0, 64, g, g0, GaugeParams(g0, p, D)).value;
      worst = std::max(worst, relative(capped, exact.value));
      tally.expect(relative(capped, exact.value) <= 0.02, tag + " capped: " + num(capped) + " vs " + num(exact.value));
    }
  }
  return tally.verdict("18 solves, max rel diff " + num(worst) + " (limit 2e-2)");
}

// 5. Values approach the graph distance as p grows.
Verdict p_trend() {
  Tally tally;
  double worst_1d = 0.0;
  {
    const MeshPtr mesh = test::uniform_chain(64);
    const MetricField g = test::density_metric(mesh, std::vector<double>(64, 2.0));
    const MetricField g0 = MetricField::identity(mesh);
    double last = 0.0;
    for (int p = 2; p <= 64; ++p) {
      const GaugeParams params(g0, p, tools::default_D(g, g0, p));
      const double v = solve_dp(0, 64, g, g0, params).value;
      const double expected = std::pow(2.0, (p - 1.0) / p);
      worst_1d = std::max(worst_1d, relative(v, expected));
      tally.expect(relative(v, expected) <= 0.02, "1-D p=" + std::to_string(p) + " value " + num(v));
      tally.expect(v > last, "1-D value not increasing at p=" + std::to_string(p));
      tally.expect(v <= 2.0 * (1 + 1e-6), "1-D value above d_g at p=" + std::to_string(p));
      last = v;
    }
  }
  const tools::ExperimentConfig cfg = tools::load_config(kConfigDir / "sweep_torus16.conf");
  const tools::Problem problem = tools::load_problem(cfg);
  const auto rows = tools::sweep_p(cfg, problem);
  std::map<std::pair<int, int>, std::map<double, double>> rel_gap;
  for (const auto& r : rows) {
    tally.expect(r.converged, "torus solve did not converge");
    rel_gap[{r.x, r.y}][r.p] = r.gap / r.d_graph;
  }
  double final_gap = 0.0;
  for (const auto& [pair, gaps] : rel_gap) {
    const std::string tag = "torus pair " + std::to_string(pair.first) + "-" + std::to_string(pair.second);
    tally.expect(gaps.count(8.0) && gaps.count(64.0), tag + " missing p=8 or p=64");
    if (!gaps.count(8.0) || !gaps.count(64.0)) continue;
    final_gap = std::max(final_gap, gaps.at(64.0));
    tally.expect(gaps.at(64.0) <= gaps.at(8.0), tag + " gap grew from p=8 to p=64");
    tally.expect(gaps.at(64.0) <= 0.05, tag + " final gap " + num(gaps.at(64.0)));
  }
  return tally.verdict("1-D max rel diff " + num(worst_1d) + "; 16x16 torus final gap " + num(final_gap) +
                       " (limit 5e-2)");
}

// 6. Spike sequence converges; the oscillating control does not.
Verdict sequence_trend() {
  Tally tally;
  auto study = [&](const std::string& file) {
    const tools::ExperimentConfig cfg = tools::load_config(kConfigDir / file);
    const tools::Problem problem = tools::load_problem(cfg);
    return tools::sequence_study(cfg, problem);
  };
  const tools::SequenceStudy spike = study("sequence_spike.conf");
  const tools::SequenceStudy osc = study("sequence_oscillation.conf");
  tally.expect(spike.converged && osc.converged, "a sequence solve did not converge");
  tally.expect(spike.p == 7.0 && spike.pairs.size() == 4 && spike.rows.size() == 8, "unexpected spike setup");
  for (std::size_t k = 1; k < spike.rows.size(); ++k) {
    const auto& prev = spike.rows[k - 1];
    const auto& cur = spike.rows[k];
    tally.expect(cur.report.I_inv < prev.report.I_inv, "I_inv not decreasing at j=" + std::to_string(cur.j));
    tally.expect(cur.sup_discrepancy < prev.sup_discrepancy,
                 "discrepancy not decreasing at j=" + std::to_string(cur.j));
  }
  const double spike_final = spike.rows.back().sup_discrepancy;
  const double osc_final = osc.rows.back().sup_discrepancy;
  const double base = *std::min_element(spike.baseline.begin(), spike.baseline.end());
  tally.expect(spike_final <= 0.05 * base, "final discrepancy " + num(spike_final) + " above 5% of " + num(base));
  tally.expect(osc_final >= 3 * spike_final, "oscillation final " + num(osc_final) + " below 3x spike");
  return tally.verdict("spike final " + num(spike_final) + " = " + num(spike_final / base) +
                       " of baseline; oscillation final " + num(osc_final) + " = " + num(osc_final / spike_final) +
                       "x spike");
}

// 7. Pointwise tensor identities and inequalities.
Verdict tensor_properties() {
  Rng rng(707);
  Tally tally;
  double duality = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    const int n = test::uniform_int(rng, 1, 3);
    const Matrix g = test::random_spd(rng, n);
    const Matrix h = test::random_spd(rng, n);
    const double err = std::abs(contravariant_norm(g.inverse(), h) - norm_wrt(h, g));
    duality = std::max(duality, err);
    tally.expect(err <= 1e-10, "duality trial " + std::to_string(trial) + " err " + num(err));
  }
  for (int trial = 0; trial < 10000; ++trial) {
    const int n = test::uniform_int(rng, 1, 3);
    const Matrix g = test::random_spd(rng, n);
    const Matrix omega = test::random_symmetric(rng, n);
    const Vector df = test::random_vector(rng, n);
    const Vector grad = g.inverse() * df;
    const double gn = gradient_norm(g, df);
    tally.expect(grad.dot(omega * grad) <= covariant_norm(omega, g) * gn * gn + 1e-10,
                 "Cauchy-Schwarz trial " + std::to_string(trial));
  }
  for (int trial = 0; trial < 10000; ++trial) {
    const int n = test::uniform_int(rng, 1, 3);
    const Matrix g = test::random_spd(rng, n);
    const Matrix g0 = test::random_spd(rng, n);
    const double bound = std::pow(n, -n / 2.0) * std::pow(norm_wrt(g, g0), n);
    // Equality for n = 1 and for conformal pairs; allow rounding only.
    tally.expect(det_wrt(g, g0) <= bound * (1 + 1e-12), "determinant trial " + std::to_string(trial));
  }
  double snow = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    const double a = test::uniform(rng, -10, 10);
    const double b = test::uniform(rng, -10, 10);
    const double t = test::uniform(rng, 0.0, 1.0);
    const double excess = std::abs(std::pow(std::abs(a), t) - std::pow(std::abs(b), t)) - std::pow(std::abs(a - b), t);
    snow = std::max(snow, excess);
    tally.expect(excess <= 1e-12, "snowflake trial " + std::to_string(trial));
  }
  return tally.verdict("4 x 10000 trials, max duality err " + num(duality) + ", max snowflake excess " + num(snow));
}

// 8. Symmetry and triangle inequality over all pairs of a 6-vertex mesh.
Verdict pseudometric() {
  Rng rng(808);
  Tally tally;
  const MeshPtr mesh = jittered_planar(rng, 6);
  const MetricField g(mesh, random_cells(rng, *mesh, 10.0));
  const MetricField g0 = MetricField::identity(mesh);
  const double p = 7.0;
  const GaugeParams params(g0, p, tools::default_D(g, g0, p));
  const int nv = mesh->num_vertices();
  std::vector<std::pair<int, int>> pairs;
  for (int x = 0; x < nv; ++x) {
    for (int y = 0; y < nv; ++y) {
      if (x != y) pairs.emplace_back(x, y);
    }
  }
  const auto outcomes = distance_matrix(pairs, g, g0, params);
  std::vector<double> d(static_cast<std::size_t>(nv * nv), 0.0);
  auto at = [&](int x, int y) -> double& { return d[static_cast<std::size_t>(x * nv + y)]; };
  for (const PairOutcome& o : outcomes) {
    tally.expect(o.result && o.result->converged, "pair " + std::to_string(o.x) + "-" + std::to_string(o.y) +
                                                      " failed: " + o.message);
    if (o.result) at(o.x, o.y) = o.result->value;
  }
  double asym = 0.0;
  double excess = -1e300;
  for (int x = 0; x < nv; ++x) {
    for (int y = 0; y < nv; ++y) {
      asym = std::max(asym, std::abs(at(x, y) - at(y, x)));
      for (int z = 0; z < nv; ++z) excess = std::max(excess, at(x, z) - at(x, y) - at(y, z));
    }
  }
  tally.expect(asym <= 1e-6, "asymmetry " + num(asym));
  tally.expect(excess <= 2e-5, "triangle excess " + num(excess));
  return tally.verdict("30 solves, max asymmetry " + num(asym) + " (limit 1e-6), max triangle excess " +
                       num(excess) + " (limit 2e-5)");
}

std::map<std::string, std::string> output_files(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream in(entry.path(), std::ios::binary);
    out[entry.path().filename().string()] = std::string(std::istreambuf_iterator<char>(in), {});
  }
  return out;
}

// 9. Two runs of every shipped config write identical bytes: CSVs, plots,
// provenance, and the mesh and metric files of `gen`.
Verdict determinism() {
  Tally tally;
  const fs::path scratch = fs::temp_directory_path() / "dpmod_acceptance_determinism";
  fs::remove_all(scratch);
  std::vector<fs::path> configs;
  for (const auto& entry : fs::directory_iterator(kConfigDir)) {
    if (entry.path().extension() == ".conf") configs.push_back(entry.path());
  }
  std::sort(configs.begin(), configs.end());
  int compared = 0;
  for (const fs::path& conf : configs) {
    const std::string name = conf.stem().string();
    std::vector<std::map<std::string, std::string>> runs;
    for (int run = 0; run < 2; ++run) {
      const fs::path out = scratch / name / std::to_string(run);
      fs::create_directories(out);
      std::ostringstream log;
      try {
        tools::run_experiment(tools::load_config(conf), out, log);
      } catch (const Error& e) {
        tally.expect(false, name + " threw " + e.what());
      }
      runs.push_back(output_files(out));
    }
    tally.expect(!runs[0].empty(), name + " wrote nothing");
    tally.expect(runs[0] == runs[1], name + " outputs differ between runs");
    compared += static_cast<int>(runs[0].size());
  }
  fs::remove_all(scratch);
  return tally.verdict(std::to_string(configs.size()) + " configs, " + std::to_string(compared) +
                       " output files byte-identical across two runs");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"scaling law", scaling_law},
      {"hoelder cap", holder_cap},
      {"oracle equivalence", oracle_equivalence},
      {"1-D analytic oracle", analytic_1d},
      {"p trend", p_trend},
      {"sequence trend", sequence_trend},
      {"tensor properties", tensor_properties},
      {"pseudometric axioms", pseudometric},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[k].second();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!v.pass) ++failed;
    std::cout << (v.pass ? "PASS" : "FAIL") << "  [" << k + 1 << "] " << criteria[k].first << ": " << v.detail
              << " (" << format_double(secs, 3) << " s)" << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << '\n';
  return failed == 0 ? 0 : 1;
}
