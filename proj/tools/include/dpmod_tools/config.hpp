#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dpmod/families.hpp"
#include "dpmod/solver.hpp"

namespace dpmod::tools {

enum class ExperimentKind { Gen, Compute, SweepP, Sequence, Scaling, ClassCheck };

std::string_view to_string(ExperimentKind kind) noexcept;

/// Everything one CLI run needs, parsed from a flat `key = value` file.
/// Keys are documented in docs/config.md; unknown keys are rejected.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Compute;

  /// Generator description; used unless `mesh_file` is set.
  FamilySpec family;
  std::filesystem::path mesh_file;
  std::filesystem::path metric_file;      ///< g; identity when empty
  std::filesystem::path background_file;  ///< g0; identity when empty

  std::vector<double> p;     ///< empty: kind-specific default
  std::optional<double> D;   ///< empty: diameter-based default
  std::string pairs = "corner-pairs";
  double pair_radius = GaugeParams::kAllPairs;
  std::uint64_t seed = 0;

  int j_min = 1;
  int j_max = 8;
  bool allow_low_p = false;
  std::vector<double> lambdas{0.5, 1.0, 2.0, 4.0};
  double scaling_tolerance = 1e-4;
  ClassParams class_params;

  SolverOptions solver;

  /// Canonical `key=value` lines with every default filled in; hashed for
  /// the config_hash column.
  [[nodiscard]] std::string canonical() const;
  /// FNV-1a 64 of canonical(), as 16 hex digits.
  [[nodiscard]] std::string hash() const;
};

/// Throws Error{ParseError} naming the line for malformed input and
/// Error{BadConfig} for values outside their domain. Relative paths are
/// resolved against `base_dir`.
ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

std::uint64_t fnv1a64(std::string_view bytes) noexcept;

}  // namespace dpmod::tools
