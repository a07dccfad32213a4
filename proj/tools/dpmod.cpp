// dpmod: command-line driver for the modified d_p distance experiments.

#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "dpmod/error.hpp"
#include "dpmod_tools/config.hpp"
#include "dpmod_tools/experiment.hpp"
#include "dpmod_tools/plot.hpp"

namespace {

using dpmod::tools::ExperimentKind;

struct RunArgs {
  std::string config;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
};

struct PlotArgs {
  std::string csv;
  std::string x;
  std::vector<std::string> y;
  std::vector<std::string> group_by;
  std::string out;
  std::string title;
  std::string y_label;
  bool log_y = false;
};

int run(ExperimentKind kind, const RunArgs& args) {
  auto cfg = dpmod::tools::load_config(args.config);
  cfg.kind = kind;
  if (args.seed) cfg.seed = *args.seed;
  const auto outcome = dpmod::tools::run_experiment(cfg, args.out, std::cerr);
  for (const auto& f : outcome.files) std::cout << f.string() << '\n';
  return outcome.exit_code;
}

int plot(const PlotArgs& args) {
  std::string y_label = args.y_label;
  if (y_label.empty()) y_label = args.y.size() == 1 ? args.y.front() : "value";
  const dpmod::tools::ChartSpec spec{args.title.empty() ? args.csv : args.title, args.x, y_label, args.log_y};
  dpmod::tools::plot_csv(args.csv, args.x, args.y, args.group_by, spec, args.out);
  std::cout << args.out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Modified d_p distances on discretized Riemannian manifolds"};
  app.require_subcommand(1);

  const std::pair<const char*, ExperimentKind> kinds[] = {
      {"gen", ExperimentKind::Gen},           {"compute", ExperimentKind::Compute},
      {"sweep-p", ExperimentKind::SweepP},    {"sequence", ExperimentKind::Sequence},
      {"scaling", ExperimentKind::Scaling},   {"class-check", ExperimentKind::ClassCheck},
  };
  const char* help[] = {
      "write mesh and metric files for a generated family member",
      "solve d^D for each configured vertex pair",
      "solve over an ascending list of exponents and compare with graph distance",
      "hypothesis integrals and distance discrepancy along a metric sequence",
      "check the scaling law under g -> lambda^2 g, g0 -> lambda^2 g0",
      "report membership in the metric class",
  };

  RunArgs run_args;
  std::optional<ExperimentKind> chosen;
  for (std::size_t i = 0; i < std::size(kinds); ++i) {
    CLI::App* sub = app.add_subcommand(kinds[i].first, help[i]);
    sub->add_option("--config", run_args.config, "key = value experiment file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", run_args.out, "output directory")->capture_default_str();
    sub->add_option("--seed", run_args.seed, "overrides the config seed");
    const ExperimentKind kind = kinds[i].second;
    sub->callback([&chosen, kind] { chosen = kind; });
  }

  PlotArgs plot_args;
  bool plotting = false;
  CLI::App* plot_cmd = app.add_subcommand("plot", "redraw an SVG line chart from a CSV");
  plot_cmd->add_option("--csv", plot_args.csv, "input CSV")->required()->check(CLI::ExistingFile);
  plot_cmd->add_option("--x", plot_args.x, "x column")->required();
  plot_cmd->add_option("--y", plot_args.y, "y columns")->required();
  plot_cmd->add_option("--group-by", plot_args.group_by, "columns that split rows into series");
  plot_cmd->add_option("--out", plot_args.out, "output SVG")->required();
  plot_cmd->add_option("--title", plot_args.title, "chart title");
  plot_cmd->add_option("--y-label", plot_args.y_label, "y axis label");
  plot_cmd->add_flag("--log-y", plot_args.log_y, "logarithmic y axis");
  plot_cmd->callback([&plotting] { plotting = true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : dpmod::tools::kExitInput;
  }

  try {
    if (plotting) return plot(plot_args);
    return run(*chosen, run_args);
  } catch (const dpmod::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return dpmod::tools::exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return dpmod::tools::kExitInput;
  }
}
