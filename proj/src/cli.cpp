#include "seqrank/cli.hpp"

#include "seqrank/config.hpp"
#include "seqrank/csv.hpp"
#include "seqrank/datagen.hpp"
#include "seqrank/errors.hpp"
#include "seqrank/experiments.hpp"
#include "seqrank/matrix_io.hpp"
#include "seqrank/random.hpp"
#include "seqrank/solver.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace seqrank {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<std::size_t> workers;
  std::string out;
};

void add_overrides(CLI::App* sub, Overrides& o) {
  sub->add_option("--config", o.config, "JSON config file");
  sub->add_option("--seed", o.seed, "base seed");
  sub->add_option("--trials", o.trials, "number of trials");
  sub->add_option("--workers", o.workers, "parallel trial slots (output does not depend on it)");
  sub->add_option("--out", o.out, "output directory");
}

ExperimentConfig resolve(Experiment e, const Overrides& o) {
  ExperimentConfig cfg = o.config.empty() ? default_config(e) : load_config(o.config, e);
  if (o.seed) cfg.base_seed = *o.seed;
  if (o.trials) cfg.trials = *o.trials;
  if (o.workers) cfg.workers = *o.workers;
  if (!o.out.empty()) cfg.output_dir = o.out;
  cfg.resolve();
  cfg.validate();
  return cfg;
}

int run_suite(Experiment e, const Overrides& o) {
  const ExperimentConfig cfg = resolve(e, o);
  const ExperimentOutput out = run_experiment(cfg);
  for (const auto& p : write_outputs(cfg, out)) std::cout << p << '\n';
  return 0;
}

struct GenArgs {
  Overrides common;
  std::optional<long long> m, d, n, r_star;
  std::string profile, noise;
  std::optional<double> kappa;
  bool text = false;
};

int run_gen(const GenArgs& g) {
  ExperimentConfig cfg = resolve(Experiment::Alloc, g.common);
  if (g.m) cfg.m = *g.m;
  if (g.d) cfg.d = *g.d;
  if (g.n) cfg.n = *g.n;
  if (g.r_star) {
    cfg.r_star = *g.r_star;
    cfg.r = 0;
  }
  if (!g.profile.empty()) cfg.profile = parse_profile(g.profile);
  if (!g.noise.empty()) cfg.noise.kind = parse_noise_kind(g.noise);
  if (g.kappa) cfg.noise.kappa = *g.kappa;
  if (g.d && !g.n) cfg.n = 0;
  cfg.resolve();
  cfg.validate();

  const GroundTruth gt = generate_w_star(cfg.m, cfg.d, cfg.r_star, cfg.profile, cfg.target_frobenius,
                                         split_seed(cfg.base_seed, Stream::GroundTruth));
  const Dataset ds = make_dataset(gt, cfg.samples(), cfg.noise, cfg.base_seed);
  fs::create_directories(cfg.output_dir);
  const fs::path dir(cfg.output_dir);
  write_matrix((dir / "W_star.bin").string(), gt.w_star);
  write_matrix((dir / "X.bin").string(), ds.x);
  write_matrix((dir / "Y.bin").string(), ds.y);
  if (g.text) {
    write_matrix_text((dir / "W_star.txt").string(), gt.w_star);
    write_matrix_text((dir / "X.txt").string(), ds.x);
    write_matrix_text((dir / "Y.txt").string(), ds.y);
  }
  json meta = {{"m", cfg.m},
               {"d", cfg.d},
               {"n", cfg.samples()},
               {"r_star", cfg.r_star},
               {"profile", to_string(cfg.profile)},
               {"sigmas", gt.sigmas},
               {"noise", {{"kind", to_string(cfg.noise.kind)}, {"kappa", cfg.noise.kappa},
                          {"sparsity", cfg.noise.sparsity}}},
               {"corrupted_entries", ds.corrupted_entries},
               {"seed", cfg.base_seed},
               {"schema_version", kSchemaVersion}};
  std::ofstream((dir / "meta.json").string()) << meta.dump(2) << '\n';
  std::cout << cfg.output_dir << '\n';
  return 0;
}

struct SolveArgs {
  std::string data;
  std::string mode = "exact";
  std::size_t r = 1;
  std::string strategy = "Equal";
  std::optional<std::size_t> total_budget;
  std::uint64_t seed = 0;
  std::string out;
  std::string config;
};

int run_solve(const SolveArgs& a) {
  const fs::path dir(a.data);
  const DenseMatrix x = read_matrix((dir / "X.bin").string());
  const DenseMatrix y = read_matrix((dir / "Y.bin").string());
  if (x.cols() != y.cols()) throw ConfigError("X and Y in " + a.data + " disagree on the sample count");

  GdConfig gd;
  if (!a.config.empty()) gd = load_config(a.config, Experiment::Alloc).gd;
  SolveTrace trace;
  if (a.mode == "exact") {
    trace = solve_exact(x, y, a.r);
  } else if (a.mode == "inexact") {
    const std::size_t total = a.total_budget.value_or(100 * a.r);
    const Strategy s = parse_strategy(a.strategy);
    if (s == Strategy::Explicit) throw ConfigError("solve takes Equal, MoreFirst or LessFirst");
    if (total < a.r) throw ConfigError("total budget must be >= r");
    trace = solve_inexact(x, y, a.r, make_allocation(s, a.r, total), gd, a.seed);
  } else {
    throw ConfigError("--mode must be exact or inexact");
  }

  json comps = json::array();
  for (const auto& c : trace.components) {
    comps.push_back({{"a", std::vector<double>(c.a.data(), c.a.data() + c.a.size())},
                     {"b", std::vector<double>(c.b.data(), c.b.data() + c.b.size())},
                     {"delta_fro", c.delta_fro},
                     {"iters_used", c.iters_used},
                     {"residual_fro_after", c.residual_fro_after}});
  }
  json j = {{"mode", to_string(trace.mode)},
            {"r", a.r},
            {"seed", a.seed},
            {"y_fro_initial", trace.y_fro_initial},
            {"exhausted", trace.exhausted},
            {"components", comps},
            {"schema_version", kSchemaVersion}};
  if (trace.allocation) {
    j["allocation"] = {{"strategy", to_string(trace.allocation->strategy)},
                       {"budgets", trace.allocation->budgets}};
  }
  const fs::path out_dir = a.out.empty() ? dir : fs::path(a.out);
  fs::create_directories(out_dir);
  const std::string trace_path = (out_dir / "trace.json").string();
  std::ofstream(trace_path) << j.dump(2) << '\n';
  write_matrix((out_dir / "W_hat.bin").string(), reconstruct_w(trace));
  if (trace.exhausted) std::cerr << "warning: labels exhausted before " << a.r << " components\n";
  std::cout << trace_path << '\n';
  return 0;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Sequential rank-1 regression: solvers, bounds and experiment suites"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "seqrank csv schema " + std::to_string(kSchemaVersion));

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "write a synthetic dataset (W_star, X, Y)");
  add_overrides(gen_cmd, gen.common);
  gen_cmd->add_option("--m", gen.m);
  gen_cmd->add_option("--d", gen.d);
  gen_cmd->add_option("--n", gen.n);
  gen_cmd->add_option("--r-star", gen.r_star);
  gen_cmd->add_option("--profile", gen.profile, "Uniform | ExponentialDecay | PowerLaw");
  gen_cmd->add_option("--noise", gen.noise, "Noiseless | Gaussian | Sparse");
  gen_cmd->add_option("--kappa", gen.kappa);
  gen_cmd->add_flag("--text", gen.text, "also write plain-text copies");

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "one exact or inexact run on a dataset directory");
  solve_cmd->add_option("--data", solve.data, "directory holding X.bin and Y.bin")->required();
  solve_cmd->add_option("--mode", solve.mode, "exact | inexact");
  solve_cmd->add_option("--r", solve.r, "number of components")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--strategy", solve.strategy, "Equal | MoreFirst | LessFirst");
  solve_cmd->add_option("--total-budget", solve.total_budget, "GD iterations across all components");
  solve_cmd->add_option("--seed", solve.seed);
  solve_cmd->add_option("--out", solve.out, "output directory (default: the data directory)");
  solve_cmd->add_option("--config", solve.config, "config file supplying the gd section");

  struct Suite {
    const char* name;
    Experiment e;
    const char* help;
  };
  const Suite suites[] = {
      {"bounds", Experiment::Bounds, "paired exact/inexact runs against the error bounds"},
      {"exp-alloc", Experiment::Alloc, "iteration allocation strategies at a fixed budget"},
      {"exp-profile", Experiment::Profile, "singular-value profiles at matched Frobenius norm"},
      {"exp-noise", Experiment::Noise, "Gaussian and sparse noise sweeps"},
      {"exp-threshold", Experiment::Threshold, "iterations needed to reach error thresholds"},
  };
  std::vector<Overrides> suite_args(std::size(suites));
  std::vector<CLI::App*> suite_cmds;
  for (std::size_t i = 0; i < std::size(suites); ++i) {
    suite_cmds.push_back(app.add_subcommand(suites[i].name, suites[i].help));
    add_overrides(suite_cmds.back(), suite_args[i]);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*gen_cmd) return run_gen(gen);
    if (*solve_cmd) return run_solve(solve);
    for (std::size_t i = 0; i < suite_cmds.size(); ++i) {
      if (*suite_cmds[i]) return run_suite(suites[i].e, suite_args[i]);
    }
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const DimensionError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "filesystem error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace seqrank
