#pragma once
//
// Experiment configuration. Files are JSON objects; every key is optional
// and unknown keys are rejected. Command-line flags override file values.
//

#include "seqrank/datagen.hpp"
#include "seqrank/solver.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace seqrank {

enum class Experiment { Alloc, Profile, Noise, Threshold, Bounds };

std::string to_string(Experiment e);
Experiment parse_experiment(std::string_view name);

struct NoiseLevel {
  NoiseKind kind = NoiseKind::Gaussian;
  double kappa = 0.0;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::Alloc;
  Eigen::Index m = 500;
  Eigen::Index d = 1000;
  Eigen::Index n = 0;       // 0: 2 * d
  Eigen::Index r_star = 20;
  Eigen::Index r = 0;       // 0: r_star
  Profile profile = Profile::PowerLaw;
  std::vector<Profile> profiles;
  double target_frobenius = kDefaultTargetFrobenius;
  NoiseSpec noise;
  std::vector<NoiseLevel> noise_levels;
  std::size_t total_budget = 8000;
  std::vector<Strategy> strategies;
  std::size_t trials = 5;
  std::uint64_t base_seed = 0;
  std::vector<double> thresholds;
  std::size_t budget_cap = 10000;
  SolveMode mode = SolveMode::Inexact;
  GdConfig gd;
  std::string output_dir = "results";
  std::size_t workers = 1;

  // Fills n and r from their dependents.
  void resolve();
  void validate() const;
  Eigen::Index samples() const { return n == 0 ? 2 * d : n; }
  std::size_t rank() const { return static_cast<std::size_t>(r == 0 ? r_star : r); }
};

ExperimentConfig default_config(Experiment e);

// Defaults for `e`, then the file's keys. A file "experiment" key must match `e`.
ExperimentConfig load_config(const std::string& path, Experiment e);
ExperimentConfig parse_config(const std::string& json_text, Experiment e);

// Canonical JSON of the resolved config (sorted keys).
std::string dump_config(const ExperimentConfig& cfg);

// FNV-1a 64 of dump_config without output_dir and workers, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace seqrank
