// dsikit command line: report, figure1, costs, verify.
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dsikit/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Dependent Sobol and Shapley sensitivity indices for Gaussian inputs"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> report_out;
  auto* report = app.add_subcommand("report", "Compute all indices and bounds for a config file");
  report->add_option("config", config_path, "Config file")->required();
  report->add_option("--out", report_out, "CSV destination (default: config `output` or stdout)");

  std::string figure_out = "figure1.csv";
  std::optional<std::uint64_t> figure_m;
  std::uint64_t figure_seed = 20240611;
  auto* figure = app.add_subcommand("figure1", "Indices and bounds for the ten reference correlation sets");
  figure->add_option("--out", figure_out, "CSV path; a .dat companion is written next to it");
  figure->add_option("--m", figure_m, "Use Monte Carlo with m = N_0 = N_v = M instead of the exact path");
  figure->add_option("--seed", figure_seed, "Random seed");

  dsikit::CostsArgs costs_args;
  auto* costs = app.add_subcommand("costs", "Model-run counts for a block layout");
  costs->add_option("--d", costs_args.d, "Number of inputs")->required();
  costs->add_option("--blocks", costs_args.blocks, "Dependent block sizes, comma separated")
      ->delimiter(',');
  costs->add_option("--m", costs_args.m, "Pick-freeze sample size");
  costs->add_option("--ni", costs_args.n_i, "Inner loop size");
  costs->add_option("--no", costs_args.n_0, "Outer loop size");
  costs->add_option("--nv", costs_args.n_v, "Output variance sample size");
  costs->add_option("--nperm", costs_args.n_perm, "Sampled permutations");

  std::uint64_t verify_seed = 20240611;
  bool corrupt = false;
  auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
  verify->add_option("--seed", verify_seed, "Random seed");
  verify->add_flag("--corrupt-fixture", corrupt, "Replace a covariance fixture with a non-PSD matrix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? dsikit::kExitOk : dsikit::kExitConfig;
  }

  if (*report) return dsikit::cmd_report(config_path, report_out, std::cout, std::cerr);
  if (*figure) return dsikit::cmd_figure1(figure_out, figure_m, figure_seed, std::cout, std::cerr);
  if (*costs) return dsikit::cmd_costs(costs_args, std::cout, std::cerr);
  return dsikit::cmd_verify(verify_seed, corrupt, std::cout, std::cerr);
}
