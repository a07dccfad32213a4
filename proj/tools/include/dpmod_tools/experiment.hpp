#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dpmod/families.hpp"
#include "dpmod/solver.hpp"
#include "dpmod_tools/config.hpp"

namespace dpmod::tools {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitNonConverged = 2;
inline constexpr int kExitScalingFailed = 3;

/// 2 for NonConverged, 1 for every other library error.
int exit_code_for(ErrorCode code) noexcept;

/// g and g0 on one mesh, from generator settings or from files.
struct Problem {
  MeshPtr mesh;
  MetricField g;
  MetricField g0;
  std::optional<Domain> domain;  ///< set for generated problems
};

Problem load_problem(const ExperimentConfig& cfg);

/// Resolves the `pairs` setting: "corner-pairs", "random-<k>" (drawn with the
/// config seed), "none", or an explicit list "a-b; c-d".
std::vector<std::pair<int, int>> select_pairs(const ExperimentConfig& cfg, const Problem& problem);

/// Diam(g) / Diam(g0)^((p-n)/p) from graph diameters.
double default_D(const MetricField& g, const MetricField& g0, double p);

/// Smallest integer exponent above 3n.
double default_sequence_p(int n);

// ---- data-level runners (no files) ----

struct SweepRow {
  double p = 0.0;
  int x = 0;
  int y = 0;
  double D = 0.0;
  double value = 0.0;
  double d_graph = 0.0;
  double gap = 0.0;  ///< |value - d_graph|
  bool converged = false;
};
std::vector<SweepRow> sweep_p(const ExperimentConfig& cfg, const Problem& problem);

struct SequenceRow {
  int j = 0;
  HypothesisReport report;
  double sup_discrepancy = 0.0;  ///< sup over pairs |d(g_j) - d(g0)|
  bool converged = true;
};
struct SequenceStudy {
  double p = 0.0;
  double D = 0.0;
  std::vector<std::pair<int, int>> pairs;
  std::vector<double> baseline;  ///< d^D_{p,g0,g0} per pair
  std::vector<SequenceRow> rows;
  bool converged = true;
};
/// The sequence member g_j of the configured family on the generated domain.
MetricField sequence_member(const ExperimentConfig& cfg, const Domain& domain, int j);
/// Unless D is configured, uses the largest diameter-based default over
/// g0 and every member, so one D serves the whole sequence.
SequenceStudy sequence_study(const ExperimentConfig& cfg, const Problem& problem, std::ostream* log = nullptr);

struct ScalingRow {
  double lambda = 0.0;
  double p = 0.0;
  int x = 0;
  int y = 0;
  double lhs = 0.0;        ///< d on (lambda^2 g, lambda^2 g0)
  double rhs = 0.0;        ///< d on (g, g0)
  double rel_err = 0.0;    ///< |lhs - lambda^t rhs| / lhs
  double gauge_err = 0.0;  ///< |gauge of lambda^t f* on the scaled pair - 1|
  bool converged = false;
};
std::vector<ScalingRow> scaling_check(const ExperimentConfig& cfg, const Problem& problem);

// ---- CLI entry points: write CSV / SVG / provenance into out_dir ----

struct RunOutcome {
  int exit_code = kExitOk;
  std::vector<std::filesystem::path> files;
};

RunOutcome run_gen(const ExperimentConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);
RunOutcome run_compute(const ExperimentConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);
RunOutcome run_p_sweep(const ExperimentConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);
RunOutcome run_sequence_study(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                              std::ostream& log);
RunOutcome run_scaling_check(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                             std::ostream& log);
RunOutcome run_class_check(const ExperimentConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);

/// Dispatches on cfg.kind.
RunOutcome run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);

}  // namespace dpmod::tools
