#include "irssense/harness.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_path;
  std::string arch;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int trials = 0;
  bool dump_spectrum = false;
  bool dump_snapshots = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "JSON config file")->required();
  cmd->add_option("--seed", opts.seed, "master seed override")
      ->each([&opts](const std::string&) { opts.seed_set = true; });
  cmd->add_option("--trials", opts.trials, "Monte Carlo trial count override");
  cmd->add_option("--out", opts.out_path, "output CSV path (default: stdout)");
  cmd->add_option("--arch", opts.arch, "architecture override")
      ->check(CLI::IsMember({"active", "semi", "passive"}));
  cmd->add_flag("--dump-spectrum", opts.dump_spectrum, "also write the estimator spectrum");
  cmd->add_flag("--dump-snapshots", opts.dump_snapshots, "also write the raw snapshots");
}

int run(irssense::ExperimentKind kind, const CommonOpts& opts) {
  irssense::ExperimentConfig cfg;
  try {
    cfg = irssense::load_config(opts.config_path);
  } catch (const std::invalid_argument& e) {
    std::cerr << "irssense: " << e.what() << '\n';
    return 1;
  } catch (const std::runtime_error& e) {
    std::cerr << "irssense: " << e.what() << '\n';
    return 2;
  }
  cfg.experiment = kind;
  if (opts.seed_set) {
    cfg.master_seed = opts.seed;
    cfg.scenario.master_seed = opts.seed;
  }
  if (opts.trials > 0) cfg.trials = opts.trials;
  if (!opts.out_path.empty()) cfg.output_path = opts.out_path;
  if (!opts.arch.empty()) {
    const auto arch = irssense::architecture_from_string(opts.arch);
    cfg.architectures = {arch};
    cfg.scenario.architecture = arch;
  }
  if (opts.dump_spectrum) cfg.dump_spectrum = true;
  if (opts.dump_snapshots) cfg.dump_snapshots = true;
  try {
    cfg.validate();
    return irssense::run_experiment(cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "irssense: " << e.what() << '\n';
    return 1;
  } catch (const std::runtime_error& e) {
    std::cerr << "irssense: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IRS-aided sensing simulator and estimator"};
  app.require_subcommand(1);

  const std::pair<std::string, irssense::ExperimentKind> kinds[] = {
      {"beampattern", irssense::ExperimentKind::beampattern},
      {"rmse", irssense::ExperimentKind::rmse_sweep},
      {"estimate", irssense::ExperimentKind::estimate},
      {"crlb", irssense::ExperimentKind::crlb},
      {"codebook", irssense::ExperimentKind::codebook},
  };
  std::vector<CommonOpts> opts(std::size(kinds));
  for (std::size_t i = 0; i < std::size(kinds); ++i) {
    add_common(app.add_subcommand(kinds[i].first), opts[i]);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  for (std::size_t i = 0; i < std::size(kinds); ++i) {
    if (app.get_subcommand(kinds[i].first)->parsed()) {
      return run(kinds[i].second, opts[i]);
    }
  }
  return 1;
}
