#pragma once
//
// Seeded experiment suites. Trial t of every suite uses seed base_seed + t,
// split into independent streams for W*, X, the noise draw and the GD starts.
// Output tables are identical for any worker count; wall_ms is the only
// column that varies between reruns.
//

#include "seqrank/analysis.hpp"
#include "seqrank/config.hpp"
#include "seqrank/csv.hpp"

#include <functional>
#include <string>
#include <vector>

namespace seqrank {

struct TrialRecord {
  std::size_t trial_index = 0;
  std::uint64_t seed = 0;
  std::string variant;
  Strategy strategy = Strategy::Equal;
  std::vector<double> delta_fros;  // delta_1 .. delta_r
  double train_err = 0.0;
  double recon_err = 0.0;
  double w_star_fro = 0.0;
  std::vector<std::size_t> iters;
  double wall_ms = 0.0;
  bool ok = true;
  std::string error;
};

struct ExperimentOutput {
  CsvTable table;
  std::string report_json;  // bounds only
};

// Runs fn(0..count-1) on up to `workers` threads.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn);

// Budgets min(2^i r, cap) for i = 0..13, deduplicated, ascending.
std::vector<std::size_t> threshold_grid(std::size_t r, std::size_t cap);

ExperimentOutput run_alloc_experiment(const ExperimentConfig& cfg);
ExperimentOutput run_profile_experiment(const ExperimentConfig& cfg);
ExperimentOutput run_noise_experiment(const ExperimentConfig& cfg);
ExperimentOutput run_threshold_experiment(const ExperimentConfig& cfg);
ExperimentOutput run_bounds_experiment(const ExperimentConfig& cfg);

ExperimentOutput run_experiment(const ExperimentConfig& cfg);

// Writes <output_dir>/<experiment>.csv, <experiment>_config.json and, for
// bounds, bounds_report.json. Returns the paths written.
std::vector<std::string> write_outputs(const ExperimentConfig& cfg, const ExperimentOutput& out);

}  // namespace seqrank
