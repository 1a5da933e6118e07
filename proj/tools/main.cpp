#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "clusterexp/cli.hpp"

int main(int argc, char** argv) {
  namespace cx = clusterexp::cli;
  CLI::App app{"Cluster-expansion correlation and forest-graph toolkit"};
  app.set_version_flag("--version", std::string("clusterexp ") + cx::kVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::string output_path = "-";
  cx::Overrides overrides;
  std::uint64_t seed = 0;
  int threads = 1;
  double beta = 0.0;
  double activity = 0.0;
  int n_max = 0;

  for (const std::string& name : cx::commands()) {
    CLI::App* sub = app.add_subcommand(name, cx::describe(name));
    sub->add_option("config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--output", output_path, "output file ('-' for stdout)");
    sub->add_option("--seed", seed, "Monte Carlo seed (replaces caps.seed)");
    sub->add_option("--threads", threads, "thread cap (recorded; evaluation is sequential)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--beta", beta, "inverse temperature (replaces model.beta)");
    sub->add_option("--activity", activity, "activity z (replaces model.activity)");
    sub->add_option("--n-max", n_max, "truncation order (replaces caps.n_max)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cx::kValidationError;
  }

  CLI::App* chosen = app.get_subcommands().front();
  if (chosen->count("--seed")) overrides.seed = seed;
  if (chosen->count("--threads")) overrides.threads = threads;
  if (chosen->count("--beta")) overrides.beta = beta;
  if (chosen->count("--activity")) overrides.activity = activity;
  if (chosen->count("--n-max")) overrides.n_max = n_max;
  return cx::run_files(chosen->get_name(), config_path, output_path, std::cerr, overrides);
}
