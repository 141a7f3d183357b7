#pragma once

#include "irssense/estimate.hpp"

#include <iosfwd>

namespace irssense {

enum class ExperimentKind { beampattern, rmse_sweep, estimate, crlb, codebook };

std::string to_string(ExperimentKind k);
ExperimentKind experiment_from_string(const std::string& s);

struct RmseRecord {
  double distance_m = 0.0;
  Architecture architecture = Architecture::active;
  std::string algorithm;
  double rmse_deg = 0.0;
  int trials = 0;
  double resolved_fraction = 0.0;
};

struct ExperimentConfig {
  Scenario scenario;  // template; per-run copies adjust architecture/targets
  ExperimentKind experiment = ExperimentKind::beampattern;
  std::vector<Architecture> architectures;  // beampattern / rmse sweep
  std::vector<std::string> algorithms;      // subset of music, esprit, mle
  std::vector<double> distances_m;          // rmse sweep
  int trials = 200;
  std::string output_path;
  std::uint64_t master_seed = 0;
  double grid_step_deg = 0.1;
  bool dump_spectrum = false;
  bool dump_snapshots = false;
  std::string codebook_design = "dft";
  double codebook_angle_deg = 30.0;
  double codebook_region_lo_deg = 20.0;
  double codebook_region_hi_deg = 40.0;
  int codebook_subarrays = 8;

  void validate() const;
};

// Parses and validates a JSON config document. Unknown keys are an error;
// every field has a default so `{"architecture": "active"}` is a complete
// config.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig config_from_json_text(const std::string& text);

// Shortest round-trip decimal formatting used for every CSV float.
std::string format_double(double v);

// Worker count: IRSSENSE_THREADS env var, 0 or unset = hardware concurrency.
int worker_count();

struct BeampatternRow {
  double angle_deg;
  Architecture architecture;
  double power_dbw;
};

std::vector<BeampatternRow> run_beampattern(const ExperimentConfig& cfg);
std::vector<RmseRecord> run_rmse_sweep(const ExperimentConfig& cfg);

void write_beampattern_csv(const std::vector<BeampatternRow>& rows, std::ostream& os);
void write_rmse_csv(const std::vector<RmseRecord>& rows, std::ostream& os);

// CLI entry points; return process exit codes (0 ok, 1 validation, 2 I/O).
int run_experiment(const ExperimentConfig& cfg);

}  // namespace irssense
