#include "dpmod_tools/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <nlohmann/json.hpp>
#include <ostream>
#include <random>
#include <sstream>

#include "dpmod/error.hpp"
#include "dpmod/format.hpp"
#include "dpmod/geodesic.hpp"
#include "dpmod/io.hpp"
#include "dpmod/parallel.hpp"
#include "dpmod_tools/plot.hpp"

namespace dpmod::tools {
namespace {

using Json = nlohmann::ordered_json;

std::string num(double v) { return format_double(v, 12); }

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
  return out;
}

void prepare_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::Io, "cannot create output directory '" + dir.string() + "'");
  }
}

/// One JSON line per run, appended to out_dir/provenance.jsonl. Contains no
/// timestamps or absolute paths, so identical runs append identical lines.
void record_provenance(const std::filesystem::path& out_dir, const ExperimentConfig& cfg, Json extra,
                       const std::vector<std::filesystem::path>& files) {
  Json rec;
  rec["experiment"] = std::string(to_string(cfg.kind));
  rec["config_hash"] = cfg.hash();
  Json config = Json::object();
  std::istringstream lines(cfg.canonical());
  for (std::string line; std::getline(lines, line);) {
    const auto eq = line.find('=');
    config[line.substr(0, eq)] = line.substr(eq + 1);
  }
  rec["config"] = std::move(config);
  for (auto& [k, v] : extra.items()) rec[k] = v;
  Json outputs = Json::array();
  for (const auto& f : files) outputs.push_back(f.filename().string());
  rec["outputs"] = std::move(outputs);
  std::ofstream out(out_dir / "provenance.jsonl", std::ios::binary | std::ios::app);
  if (!out) throw Error(ErrorCode::Io, "cannot append provenance record");
  out << rec.dump() << '\n';
}

int combine(int current, int code) {
  // NonConverged outranks input errors: it is the more specific failure.
  if (current == kExitNonConverged || code == kExitNonConverged) return kExitNonConverged;
  return std::max(current, code);
}

std::vector<double> p_values(const ExperimentConfig& cfg, int n) {
  if (!cfg.p.empty()) return cfg.p;
  return {default_sequence_p(n)};
}

struct SolveTask {
  int x;
  int y;
  const MetricField* g;
  const GaugeParams* params;
};

struct SolveOutcome {
  std::optional<DistanceResult> result;
  std::optional<ErrorCode> error;
  std::string message;
};

/// Runs independent solves concurrently; outcomes keep the task order.
std::vector<SolveOutcome> solve_all(const std::vector<SolveTask>& tasks, const MetricField& g0,
                                    const SolverOptions& options) {
  std::vector<SolveOutcome> out(tasks.size());
  parallel_for(tasks.size(), [&](std::size_t i) {
    const SolveTask& t = tasks[i];
    try {
      out[i].result = solve_dp(t.x, t.y, *t.g, g0, *t.params, options);
    } catch (const NonConvergedError& e) {
      out[i].result = e.diagnostics();
      out[i].error = e.code();
      out[i].message = e.what();
    } catch (const Error& e) {
      out[i].error = e.code();
      out[i].message = e.what();
    }
  });
  return out;
}

Domain require_domain(const Problem& problem, const char* what) {
  if (!problem.domain) throw Error(ErrorCode::BadConfig, std::string(what) + " needs a generated domain");
  return *problem.domain;
}

}  // namespace

int exit_code_for(ErrorCode code) noexcept { return code == ErrorCode::NonConverged ? kExitNonConverged : kExitInput; }

Problem load_problem(const ExperimentConfig& cfg) {
  if (cfg.mesh_file.empty()) {
    Generated gen = generate(cfg.family);
    return {gen.domain.mesh, std::move(gen.g), std::move(gen.g0), std::move(gen.domain)};
  }
  MeshPtr mesh = read_mesh(cfg.mesh_file);
  MetricField g = cfg.metric_file.empty() ? MetricField::identity(mesh) : read_metric(cfg.metric_file, mesh);
  MetricField g0 =
      cfg.background_file.empty() ? MetricField::identity(mesh) : read_metric(cfg.background_file, mesh);
  return {mesh, std::move(g), std::move(g0), std::nullopt};
}

std::vector<std::pair<int, int>> select_pairs(const ExperimentConfig& cfg, const Problem& problem) {
  const std::string& spec = cfg.pairs;
  const int nv = problem.mesh->num_vertices();
  if (spec == "none" || spec.empty()) return {};
  if (spec == "corner-pairs") return corner_pairs(require_domain(problem, "corner-pairs"));
  if (spec.rfind("random-", 0) == 0) {
    const std::string count = spec.substr(7);
    int k = 0;
    try {
      k = std::stoi(count);
    } catch (const std::exception&) {
      throw Error(ErrorCode::BadConfig, "pairs: bad count in '" + spec + "'");
    }
    if (k < 0) throw Error(ErrorCode::BadConfig, "pairs: negative count");
    if (nv < 2) throw Error(ErrorCode::BadConfig, "pairs: mesh has fewer than two vertices");
    std::mt19937_64 rng(cfg.seed);
    std::vector<std::pair<int, int>> out;
    while (static_cast<int>(out.size()) < k) {
      const int x = static_cast<int>(rng() % static_cast<std::uint64_t>(nv));
      const int y = static_cast<int>(rng() % static_cast<std::uint64_t>(nv));
      if (x != y) out.emplace_back(x, y);
    }
    return out;
  }
  std::vector<std::pair<int, int>> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ';')) {
    int x = 0, y = 0;
    char dash = 0;
    std::istringstream is(item);
    if (!(is >> x >> dash >> y) || dash != '-') {
      throw Error(ErrorCode::BadConfig, "pairs: cannot read '" + item + "' (expected a-b)");
    }
    std::string rest;
    if (is >> rest) throw Error(ErrorCode::BadConfig, "pairs: trailing text in '" + item + "'");
    out.emplace_back(x, y);
  }
  return out;
}

double default_D(const MetricField& g, const MetricField& g0, double p) {
  const int n = g.mesh()->dimension();
  const double t = (p - n) / p;
  return diameter(all_pairs_distances(g)) / std::pow(diameter(all_pairs_distances(g0, "g0")), t);
}

double default_sequence_p(int n) { return 3.0 * n + 1.0; }

std::vector<SweepRow> sweep_p(const ExperimentConfig& cfg, const Problem& problem) {
  const int n = problem.mesh->dimension();
  std::vector<double> ps = cfg.p;
  if (ps.empty()) {
    for (double p = 2; p <= kMaxExponent; p *= 2) {
      if (p > n) ps.push_back(p);
    }
  }
  if (!std::is_sorted(ps.begin(), ps.end()) || std::adjacent_find(ps.begin(), ps.end()) != ps.end()) {
    throw Error(ErrorCode::BadConfig, "sweep-p needs a strictly ascending p list");
  }
  const auto pairs = select_pairs(cfg, problem);
  const DistanceMatrix dg = all_pairs_distances(problem.g);
  const double diam_g = diameter(dg);
  auto d0 = std::make_shared<const DistanceMatrix>(all_pairs_distances(problem.g0, "g0"));
  const double diam_g0 = diameter(*d0);

  std::vector<GaugeParams> params;
  params.reserve(ps.size());
  for (double p : ps) {
    const double D = cfg.D ? *cfg.D : diam_g / std::pow(diam_g0, (p - n) / p);
    params.emplace_back(d0, n, p, D, cfg.pair_radius);
  }
  std::vector<SolveTask> tasks;
  for (const auto& [x, y] : pairs) {
    for (const GaugeParams& gp : params) tasks.push_back({x, y, &problem.g, &gp});
  }
  const auto outcomes = solve_all(tasks, problem.g0, cfg.solver);
  std::vector<SweepRow> rows;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const SolveOutcome& o = outcomes[i];
    if (o.error && !o.result) throw Error(*o.error, o.message);
    SweepRow r;
    r.p = tasks[i].params->p();
    r.x = tasks[i].x;
    r.y = tasks[i].y;
    r.D = tasks[i].params->D();
    r.value = o.result->value;
    r.d_graph = dg(r.x, r.y);
    r.gap = std::abs(r.value - r.d_graph);
    r.converged = o.result->converged;
    rows.push_back(r);
  }
  return rows;
}

MetricField sequence_member(const ExperimentConfig& cfg, const Domain& domain, int j) {
  const std::string& family = cfg.family.family;
  if (family == "spike") return make_spike(domain, cfg.family.spike.shape(j));
  if (family == "oscillation") return make_oscillation(domain, j);
  if (family == "flat") return domain.metric;
  if (family == "conformal-constant") return make_conformal_constant(domain.metric, cfg.family.conformal);
  throw Error(ErrorCode::BadConfig, "family '" + family + "' has no sequence");
}

SequenceStudy sequence_study(const ExperimentConfig& cfg, const Problem& problem, std::ostream* log) {
  const Domain domain = require_domain(problem, "sequence");
  const int n = domain.mesh->dimension();
  if (cfg.p.size() > 1) throw Error(ErrorCode::BadConfig, "sequence takes a single p");
  SequenceStudy study;
  study.p = cfg.p.empty() ? default_sequence_p(n) : cfg.p.front();
  if (!(study.p > 3.0 * n)) {
    if (!cfg.allow_low_p) {
      throw Error(ErrorCode::BadConfig, "sequence studies need p > 3n (set allow_low_p = true to override)");
    }
    if (log) *log << "warning: p = " << num(study.p) << " <= 3n; exploratory run\n";
  }
  const MetricField& g0 = domain.metric;
  std::vector<MetricField> members;
  for (int j = cfg.j_min; j <= cfg.j_max; ++j) members.push_back(sequence_member(cfg, domain, j));

  auto d0 = std::make_shared<const DistanceMatrix>(all_pairs_distances(g0, "g0"));
  const double t = (study.p - n) / study.p;
  if (cfg.D) {
    study.D = *cfg.D;
  } else {
    const double diam0 = diameter(*d0);
    study.D = diam0 / std::pow(diam0, t);
    for (const MetricField& g : members) study.D = std::max(study.D, diameter(all_pairs_distances(g)) / std::pow(diam0, t));
  }
  const GaugeParams params(d0, n, study.p, study.D, cfg.pair_radius);
  study.pairs = select_pairs(cfg, problem);

  std::vector<SolveTask> tasks;
  for (const auto& [x, y] : study.pairs) tasks.push_back({x, y, &g0, &params});
  for (const MetricField& g : members) {
    for (const auto& [x, y] : study.pairs) tasks.push_back({x, y, &g, &params});
  }
  const auto outcomes = solve_all(tasks, g0, cfg.solver);
  for (const SolveOutcome& o : outcomes) {
    if (o.error && !o.result) throw Error(*o.error, o.message);
  }
  const std::size_t np = study.pairs.size();
  for (std::size_t k = 0; k < np; ++k) {
    study.baseline.push_back(outcomes[k].result->value);
    study.converged &= outcomes[k].result->converged;
  }
  for (std::size_t m = 0; m < members.size(); ++m) {
    SequenceRow row;
    row.j = cfg.j_min + static_cast<int>(m);
    row.report = hypothesis_functionals(members[m], g0, study.p);
    for (std::size_t k = 0; k < np; ++k) {
      const DistanceResult& r = *outcomes[np * (m + 1) + k].result;
      row.sup_discrepancy = std::max(row.sup_discrepancy, std::abs(r.value - study.baseline[k]));
      row.converged &= r.converged;
    }
    study.converged &= row.converged;
    study.rows.push_back(row);
  }
  return study;
}

std::vector<ScalingRow> scaling_check(const ExperimentConfig& cfg, const Problem& problem) {
  const int n = problem.mesh->dimension();
  const auto pairs = select_pairs(cfg, problem);
  auto d0 = std::make_shared<const DistanceMatrix>(all_pairs_distances(problem.g0, "g0"));
  struct Scaled {
    double lambda;
    MetricField g;
    std::shared_ptr<const DistanceMatrix> d0;
  };
  std::vector<Scaled> scaled;
  for (double lambda : cfg.lambdas) {
    auto [g, g0] = make_scaled_pair(problem.g, problem.g0, lambda);
    auto dl = std::make_shared<const DistanceMatrix>(all_pairs_distances(g0, "g0"));
    scaled.push_back({lambda, std::move(g), std::move(dl)});
  }

  // Same D on both sides: the Hoelder quotient is invariant under f -> lambda^t f
  // together with d_g0 -> lambda d_g0.
  std::vector<GaugeParams> base;
  std::vector<GaugeParams> scaled_params;
  for (double p : p_values(cfg, n)) {
    const double D = cfg.D ? *cfg.D : default_D(problem.g, problem.g0, p);
    base.emplace_back(d0, n, p, D, cfg.pair_radius);
  }
  for (const GaugeParams& b : base) {
    for (const Scaled& s : scaled) {
      const double radius = cfg.pair_radius * s.lambda;  // same pairs after scaling
      scaled_params.emplace_back(s.d0, n, b.p(), b.D(), radius);
    }
  }

  std::vector<SolveTask> tasks;
  for (const GaugeParams& b : base) {
    for (const auto& [x, y] : pairs) tasks.push_back({x, y, &problem.g, &b});
  }
  for (std::size_t bi = 0; bi < base.size(); ++bi) {
    for (std::size_t si = 0; si < scaled.size(); ++si) {
      for (const auto& [x, y] : pairs) {
        tasks.push_back({x, y, &scaled[si].g, &scaled_params[bi * scaled.size() + si]});
      }
    }
  }
  const auto outcomes = solve_all(tasks, problem.g0, cfg.solver);
  for (const SolveOutcome& o : outcomes) {
    if (o.error && !o.result) throw Error(*o.error, o.message);
  }

  std::vector<ScalingRow> rows;
  const std::size_t np = pairs.size();
  const std::size_t offset = base.size() * np;
  for (std::size_t bi = 0; bi < base.size(); ++bi) {
    const double p = base[bi].p();
    const double t = base[bi].exponent();
    for (std::size_t si = 0; si < scaled.size(); ++si) {
      for (std::size_t k = 0; k < np; ++k) {
        const DistanceResult& unscaled = *outcomes[bi * np + k].result;
        const DistanceResult& lifted = *outcomes[offset + (bi * scaled.size() + si) * np + k].result;
        ScalingRow r;
        r.lambda = scaled[si].lambda;
        r.p = p;
        r.x = pairs[k].first;
        r.y = pairs[k].second;
        r.lhs = lifted.value;
        r.rhs = unscaled.value;
        const double factor = std::pow(r.lambda, t);
        r.rel_err = std::abs(r.lhs - factor * r.rhs) / r.lhs;
        // lambda^t f* must be admissible on the scaled pair with unchanged gauge.
        FunctionField moved = unscaled.extremal;
        for (double& v : moved) v *= factor;
        r.gauge_err = std::abs(gauge(moved, scaled[si].g, scaled_params[bi * scaled.size() + si]) - 1.0);
        r.converged = unscaled.converged && lifted.converged;
        rows.push_back(r);
      }
    }
  }
  return rows;
}

// ---- file-level runners ----

RunOutcome run_gen(const ExperimentConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log) {
  prepare_dir(out_dir);
  const Problem problem = load_problem(cfg);
  RunOutcome outcome;
  const auto mesh_path = out_dir / "mesh.dpmesh";
  const auto g_path = out_dir / "g.dpmetric";
  const auto g0_path = out_dir / "g0.dpmetric";
  write_mesh(mesh_path, *problem.mesh);
  write_metric(g_path, problem.g);
  write_metric(g0_path, problem.g0);
  outcome.files = {mesh_path, g_path, g0_path};

  const FamilySpec& f = cfg.family;
  Json spec;
  spec["family"] = f.family;
  spec["dimension"] = f.dimension;
  spec["resolution"] = f.resolution;
  spec["torus"] = f.torus;
  spec["j"] = f.j;
  spec["conformal"] = f.conformal;
  spec["lambda"] = f.lambda;
  spec["spike"] = {{"amplitude_scale", f.spike.amplitude_scale},
                   {"radius_scale", f.spike.radius_scale},
                   {"epsilon", f.spike.epsilon},
                   {"profile", f.spike.profile == SpikeProfile::Tube ? "tube" : "point"}};
  if (f.family == "spike") {
    const SpikeShape shape = f.spike.shape(f.j);
    spec["spike"]["amplitude"] = shape.amplitude;
    spec["spike"]["radius"] = shape.radius;
  }
  record_provenance(out_dir, cfg, Json{{"family_spec", spec}}, outcome.files);
  log << "wrote " << problem.mesh->num_vertices() << " vertices, " << problem.mesh->num_cells() << " cells to "
      << out_dir.string() << '\n';
  return outcome;
}

RunOutcome run_compute(const ExperimentConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log) {
  prepare_dir(out_dir);
  const Problem problem = load_problem(cfg);
  const int n = problem.mesh->dimension();
  const auto pairs = select_pairs(cfg, problem);
  auto d0 = std::make_shared<const DistanceMatrix>(all_pairs_distances(problem.g0, "g0"));

  std::vector<GaugeParams> params;
  for (double p : p_values(cfg, n)) {
    const double D = cfg.D ? *cfg.D : default_D(problem.g, problem.g0, p);
    params.emplace_back(d0, n, p, D, cfg.pair_radius);
  }
  std::vector<SolveTask> tasks;
  for (const GaugeParams& gp : params) {
    for (const auto& [x, y] : pairs) tasks.push_back({x, y, &problem.g, &gp});
  }
  const auto outcomes = solve_all(tasks, problem.g0, cfg.solver);

  RunOutcome outcome;
  const auto csv = out_dir / "compute.csv";
  {
    auto out = open_output(csv);
    const std::string hash = cfg.hash();
    out << "x,y,p,D,value,active_constraint,iters,energy_residual,holder_residual,converged,config_hash\n";
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      const SolveTask& t = tasks[i];
      const SolveOutcome& o = outcomes[i];
      out << t.x << ',' << t.y << ',' << num(t.params->p()) << ',' << num(t.params->D()) << ',';
      if (o.result) {
        const DistanceResult& r = *o.result;
        out << num(r.value) << ',' << to_string(r.active) << ',' << r.iterations << ',' << num(r.energy_residual)
            << ',' << num(r.holder_residual) << ',' << (r.converged ? "true" : "false");
      } else {
        out << ",error:" << to_string(*o.error) << ",,,,false";
      }
      out << ',' << hash << '\n';
      if (o.error) {
        outcome.exit_code = combine(outcome.exit_code, exit_code_for(*o.error));
        log << "pair (" << t.x << ", " << t.y << "): " << o.message << '\n';
      }
    }
  }
  outcome.files.push_back(csv);
  record_provenance(out_dir, cfg, Json::object(), outcome.files);
  return outcome;
}

RunOutcome run_p_sweep(const ExperimentConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log) {
  prepare_dir(out_dir);
  const Problem problem = load_problem(cfg);
  const auto rows = sweep_p(cfg, problem);
  RunOutcome outcome;
  const auto csv = out_dir / "sweep_p.csv";
  {
    auto out = open_output(csv);
    const std::string hash = cfg.hash();
    out << "p,value,d_graph,gap,x,y,D,converged,config_hash\n";
    for (const SweepRow& r : rows) {
      out << num(r.p) << ',' << num(r.value) << ',' << num(r.d_graph) << ',' << num(r.gap) << ',' << r.x << ','
          << r.y << ',' << num(r.D) << ',' << (r.converged ? "true" : "false") << ',' << hash << '\n';
      if (!r.converged) outcome.exit_code = kExitNonConverged;
    }
  }
  const auto svg = out_dir / "sweep_p.svg";
  plot_csv(csv, "p", {"value", "d_graph"}, {"x", "y"}, {"value against p", "p", "distance", false}, svg);
  outcome.files = {csv, svg};
  record_provenance(out_dir, cfg, Json::object(), outcome.files);
  if (outcome.exit_code) log << "some solves did not converge\n";
  return outcome;
}

RunOutcome run_sequence_study(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                              std::ostream& log) {
  prepare_dir(out_dir);
  const Problem problem = load_problem(cfg);
  const SequenceStudy study = sequence_study(cfg, problem, &log);
  RunOutcome outcome;
  const auto csv = out_dir / "sequence.csv";
  {
    auto out = open_output(csv);
    const std::string hash = cfg.hash();
    out << "j,I_g,I_inv,I_eta,I_33,sup_pair_discrepancy,config_hash\n";
    for (const SequenceRow& r : study.rows) {
      out << r.j << ',' << num(r.report.I_g) << ',' << num(r.report.I_inv) << ',' << num(r.report.I_eta) << ','
          << num(r.report.I_33) << ',' << num(r.sup_discrepancy) << ',' << hash << '\n';
    }
  }
  const auto svg = out_dir / "sequence.svg";
  plot_csv(csv, "j", {"I_inv", "sup_pair_discrepancy"}, {}, {"sequence study", "j", "value", true}, svg);
  outcome.files = {csv, svg};
  Json baseline = Json::array();
  for (double b : study.baseline) baseline.push_back(b);
  record_provenance(out_dir, cfg, Json{{"p", study.p}, {"D", study.D}, {"baseline", baseline}}, outcome.files);
  if (!study.converged) {
    outcome.exit_code = kExitNonConverged;
    log << "some solves did not converge\n";
  }
  return outcome;
}

RunOutcome run_scaling_check(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                             std::ostream& log) {
  prepare_dir(out_dir);
  const Problem problem = load_problem(cfg);
  const auto rows = scaling_check(cfg, problem);
  RunOutcome outcome;
  const auto csv = out_dir / "scaling.csv";
  bool failed = false;
  bool nonconverged = false;
  {
    auto out = open_output(csv);
    const std::string hash = cfg.hash();
    out << "lambda,lhs,rhs,rel_err,gauge_err,p,x,y,converged,config_hash\n";
    for (const ScalingRow& r : rows) {
      out << num(r.lambda) << ',' << num(r.lhs) << ',' << num(r.rhs) << ',' << num(r.rel_err) << ','
          << num(r.gauge_err) << ',' << num(r.p) << ',' << r.x << ',' << r.y << ',' << (r.converged ? "true" : "false")
          << ',' << hash << '\n';
      failed |= !(r.rel_err <= cfg.scaling_tolerance);
      nonconverged |= !r.converged;
    }
  }
  outcome.files = {csv};
  record_provenance(out_dir, cfg, Json::object(), outcome.files);
  if (nonconverged) {
    outcome.exit_code = kExitNonConverged;
    log << "some solves did not converge\n";
  } else if (failed) {
    outcome.exit_code = kExitScalingFailed;
    log << "scaling law violated beyond tolerance " << num(cfg.scaling_tolerance) << '\n';
  }
  return outcome;
}

RunOutcome run_class_check(const ExperimentConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log) {
  prepare_dir(out_dir);
  const Problem problem = load_problem(cfg);
  const ClassParams& cp = cfg.class_params;
  const ClassReport report = check_class_membership(problem.g, problem.g0, cp);
  struct Item {
    const char* name;
    double measured;
    double bound;
    bool ok;
  };
  const Item items[] = {
      {"metric_norm", report.norm_g, cp.V1, report.metric_bound},
      {"inverse_norm", report.norm_ginv, cp.V2, report.inverse_bound},
      {"diameter", report.diameter, cp.D, report.diameter_bound},
  };
  RunOutcome outcome;
  const auto csv = out_dir / "class_check.csv";
  {
    auto out = open_output(csv);
    const std::string hash = cfg.hash();
    out << "item,measured,bound,ok,config_hash\n";
    int index = 1;
    for (const Item& it : items) {
      out << it.name << ',' << num(it.measured) << ',' << num(it.bound) << ',' << (it.ok ? "true" : "false") << ','
          << hash << '\n';
      log << '(' << index++ << ") " << it.name << ": measured " << num(it.measured) << " vs bound " << num(it.bound)
          << (it.ok ? "  ok" : "  VIOLATED") << '\n';
    }
    out << "member,,," << (report.member() ? "true" : "false") << ',' << hash << '\n';
  }
  log << (report.member() ? "member of the class\n" : "not a member of the class\n");
  outcome.files = {csv};
  record_provenance(out_dir, cfg, Json{{"member", report.member()}}, outcome.files);
  return outcome;
}

RunOutcome run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log) {
  switch (cfg.kind) {
    case ExperimentKind::Gen: return run_gen(cfg, out_dir, log);
    case ExperimentKind::Compute: return run_compute(cfg, out_dir, log);
    case ExperimentKind::SweepP: return run_p_sweep(cfg, out_dir, log);
    case ExperimentKind::Sequence: return run_sequence_study(cfg, out_dir, log);
    case ExperimentKind::Scaling: return run_scaling_check(cfg, out_dir, log);
    case ExperimentKind::ClassCheck: return run_class_check(cfg, out_dir, log);
  }
  throw Error(ErrorCode::BadConfig, "unknown experiment");
}

}  // namespace dpmod::tools
