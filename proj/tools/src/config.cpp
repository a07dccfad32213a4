#include "dpmod_tools/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <sstream>

#include "dpmod/error.hpp"
#include "dpmod/format.hpp"

namespace dpmod::tools {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

double to_double(const std::string& text, int line) {
  if (text == "inf") return GaugeParams::kAllPairs;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    fail(line, "expected a number, got '" + text + "'");
  }
  if (used != text.size()) fail(line, "expected a number, got '" + text + "'");
  return v;
}

long long to_integer(const std::string& text, int line) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    fail(line, "expected an integer, got '" + text + "'");
  }
  if (used != text.size()) fail(line, "expected an integer, got '" + text + "'");
  return v;
}

std::uint64_t to_seed(const std::string& text, int line) {
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    fail(line, "expected an unsigned integer, got '" + text + "'");
  }
  if (used != text.size() || text.front() == '-') fail(line, "expected an unsigned integer, got '" + text + "'");
  return v;
}

bool to_bool(const std::string& text, int line) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  fail(line, "expected true or false, got '" + text + "'");
}

/// Entries separated by commas, whitespace, or both.
std::vector<double> to_list(const std::string& text, int line) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) fail(line, "empty list entry");
    std::istringstream words(item);
    std::string word;
    while (words >> word) out.push_back(to_double(word, line));
  }
  return out;
}

/// Shortest text that reads back to the same double.
std::string exact(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += exact(values[i]);
  }
  return out;
}

ExperimentKind to_kind(const std::string& text, int line) {
  for (auto k : {ExperimentKind::Gen, ExperimentKind::Compute, ExperimentKind::SweepP, ExperimentKind::Sequence,
                 ExperimentKind::Scaling, ExperimentKind::ClassCheck}) {
    if (text == to_string(k)) return k;
  }
  fail(line, "unknown experiment '" + text + "'");
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& text) {
  const std::filesystem::path p(text);
  return p.is_absolute() || base.empty() ? p : base / p;
}

}  // namespace

std::string_view to_string(ExperimentKind kind) noexcept {
  switch (kind) {
    case ExperimentKind::Gen: return "gen";
    case ExperimentKind::Compute: return "compute";
    case ExperimentKind::SweepP: return "sweep-p";
    case ExperimentKind::Sequence: return "sequence";
    case ExperimentKind::Scaling: return "scaling";
    case ExperimentKind::ClassCheck: return "class-check";
  }
  return "unknown";
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
  ExperimentConfig cfg;
  // Explicit schedule keys, applied over the per-dimension defaults at the end.
  std::optional<double> amplitude, radius, epsilon;
  std::optional<SpikeProfile> profile;
  std::map<std::string, int> seen;

  using Setter = std::function<void(const std::string&, int)>;
  const std::map<std::string, Setter> setters{
      {"experiment", [&](const std::string& v, int l) { cfg.kind = to_kind(v, l); }},
      {"family", [&](const std::string& v, int) { cfg.family.family = v; }},
      {"dimension", [&](const std::string& v, int l) { cfg.family.dimension = static_cast<int>(to_integer(v, l)); }},
      {"resolution", [&](const std::string& v, int l) { cfg.family.resolution = static_cast<int>(to_integer(v, l)); }},
      {"torus", [&](const std::string& v, int l) { cfg.family.torus = to_bool(v, l); }},
      {"j", [&](const std::string& v, int l) { cfg.family.j = static_cast<int>(to_integer(v, l)); }},
      {"conformal", [&](const std::string& v, int l) { cfg.family.conformal = to_double(v, l); }},
      {"lambda", [&](const std::string& v, int l) { cfg.family.lambda = to_double(v, l); }},
      {"spike.amplitude", [&](const std::string& v, int l) { amplitude = to_double(v, l); }},
      {"spike.radius", [&](const std::string& v, int l) { radius = to_double(v, l); }},
      {"spike.epsilon", [&](const std::string& v, int l) { epsilon = to_double(v, l); }},
      {"spike.profile", [&](const std::string& v, int l) {
         if (v == "point") profile = SpikeProfile::Point;
         else if (v == "tube") profile = SpikeProfile::Tube;
         else fail(l, "spike.profile must be point or tube");
       }},
      {"mesh", [&](const std::string& v, int) { cfg.mesh_file = resolve(base_dir, v); }},
      {"metric", [&](const std::string& v, int) { cfg.metric_file = resolve(base_dir, v); }},
      {"background", [&](const std::string& v, int) { cfg.background_file = resolve(base_dir, v); }},
      {"p", [&](const std::string& v, int l) { cfg.p = to_list(v, l); }},
      {"D", [&](const std::string& v, int l) {
         if (v == "auto") cfg.D.reset();
         else cfg.D = to_double(v, l);
       }},
      {"pairs", [&](const std::string& v, int) { cfg.pairs = v; }},
      {"pair_radius", [&](const std::string& v, int l) { cfg.pair_radius = to_double(v, l); }},
      {"seed", [&](const std::string& v, int l) { cfg.seed = to_seed(v, l); }},
      {"j_min", [&](const std::string& v, int l) { cfg.j_min = static_cast<int>(to_integer(v, l)); }},
      {"j_max", [&](const std::string& v, int l) { cfg.j_max = static_cast<int>(to_integer(v, l)); }},
      {"allow_low_p", [&](const std::string& v, int l) { cfg.allow_low_p = to_bool(v, l); }},
      {"lambdas", [&](const std::string& v, int l) { cfg.lambdas = to_list(v, l); }},
      {"scaling_tolerance", [&](const std::string& v, int l) { cfg.scaling_tolerance = to_double(v, l); }},
      {"class.q1", [&](const std::string& v, int l) { cfg.class_params.q1 = to_double(v, l); }},
      {"class.q2", [&](const std::string& v, int l) { cfg.class_params.q2 = to_double(v, l); }},
      {"class.V1", [&](const std::string& v, int l) { cfg.class_params.V1 = to_double(v, l); }},
      {"class.V2", [&](const std::string& v, int l) { cfg.class_params.V2 = to_double(v, l); }},
      {"class.D", [&](const std::string& v, int l) { cfg.class_params.D = to_double(v, l); }},
      {"solver.max_iterations", [&](const std::string& v, int l) {
         cfg.solver.max_iterations = static_cast<int>(to_integer(v, l));
       }},
      {"solver.gap_tolerance", [&](const std::string& v, int l) { cfg.solver.gap_tolerance = to_double(v, l); }},
      {"solver.barrier_growth", [&](const std::string& v, int l) { cfg.solver.barrier_growth = to_double(v, l); }},
  };

  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) fail(line, "expected key = value");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key.empty()) fail(line, "missing key");
    const auto it = setters.find(key);
    if (it == setters.end()) fail(line, "unknown key '" + key + "'");
    if (auto [pos, fresh] = seen.emplace(key, line); !fresh) {
      fail(line, "duplicate key '" + key + "' (first set on line " + std::to_string(pos->second) + ")");
    }
    if (value.empty()) fail(line, "missing value for '" + key + "'");
    it->second(value, line);
  }
  cfg.family.spike = SpikeSchedule::defaults(cfg.family.dimension);
  if (amplitude) cfg.family.spike.amplitude_scale = *amplitude;
  if (radius) cfg.family.spike.radius_scale = *radius;
  if (epsilon) cfg.family.spike.epsilon = *epsilon;
  if (profile) cfg.family.spike.profile = *profile;

  auto bad = [](const std::string& what) { throw Error(ErrorCode::BadConfig, what); };
  if (cfg.j_min < 1 || cfg.j_max < cfg.j_min) bad("need 1 <= j_min <= j_max");
  if (cfg.family.j < 1) bad("j must be >= 1");
  for (double l : cfg.lambdas) {
    if (!(l > 0.0)) bad("lambdas must be positive");
  }
  if (cfg.D && !(*cfg.D > 0.0)) bad("D must be positive");
  if (!(cfg.pair_radius > 0.0)) bad("pair_radius must be positive");
  if (!(cfg.solver.barrier_growth > 1.0)) bad("solver.barrier_growth must exceed 1");
  if (!(cfg.solver.gap_tolerance > 0.0)) bad("solver.gap_tolerance must be positive");
  if (cfg.solver.max_iterations < 1) bad("solver.max_iterations must be positive");
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config '" + path.string() + "'");
  return parse_config(in, path.parent_path());
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream out;
  auto put = [&](const std::string& key, const std::string& value) { out << key << '=' << value << '\n'; };
  put("experiment", std::string(to_string(kind)));
  if (mesh_file.empty()) {
    put("family", family.family);
    put("dimension", std::to_string(family.dimension));
    put("resolution", std::to_string(family.resolution));
    put("torus", family.torus ? "true" : "false");
    put("j", std::to_string(family.j));
    put("conformal", exact(family.conformal));
    put("lambda", exact(family.lambda));
    put("spike.amplitude", exact(family.spike.amplitude_scale));
    put("spike.radius", exact(family.spike.radius_scale));
    put("spike.epsilon", exact(family.spike.epsilon));
    put("spike.profile", family.spike.profile == SpikeProfile::Tube ? "tube" : "point");
  } else {
    // Paths are recorded by file name only so the hash does not depend on
    // where the run happens.
    put("mesh", mesh_file.filename().string());
    put("metric", metric_file.filename().string());
    put("background", background_file.filename().string());
  }
  put("p", join(p));
  put("D", D ? exact(*D) : "auto");
  put("pairs", pairs);
  put("pair_radius", exact(pair_radius));
  put("seed", std::to_string(seed));
  put("j_min", std::to_string(j_min));
  put("j_max", std::to_string(j_max));
  put("allow_low_p", allow_low_p ? "true" : "false");
  put("lambdas", join(lambdas));
  put("scaling_tolerance", exact(scaling_tolerance));
  put("class.q1", exact(class_params.q1));
  put("class.q2", exact(class_params.q2));
  put("class.V1", exact(class_params.V1));
  put("class.V2", exact(class_params.V2));
  put("class.D", exact(class_params.D));
  put("solver.max_iterations", std::to_string(solver.max_iterations));
  put("solver.gap_tolerance", exact(solver.gap_tolerance));
  put("solver.barrier_growth", exact(solver.barrier_growth));
  return out.str();
}

std::string ExperimentConfig::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical())));
  return buf;
}

}  // namespace dpmod::tools
