#include "seqrank/config.hpp"

#include "seqrank/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace seqrank {

using nlohmann::json;

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::Alloc: return "alloc";
    case Experiment::Profile: return "profile";
    case Experiment::Noise: return "noise";
    case Experiment::Threshold: return "threshold";
    case Experiment::Bounds: return "bounds";
  }
  return "?";
}

Experiment parse_experiment(std::string_view name) {
  for (auto e : {Experiment::Alloc, Experiment::Profile, Experiment::Noise, Experiment::Threshold,
                 Experiment::Bounds}) {
    if (name == to_string(e)) return e;
  }
  throw ConfigError("unknown experiment '" + std::string(name) + "'");
}

ExperimentConfig default_config(Experiment e) {
  ExperimentConfig c;
  c.experiment = e;
  c.strategies = {Strategy::MoreFirst, Strategy::Equal, Strategy::LessFirst};
  switch (e) {
    case Experiment::Alloc:
      break;
    case Experiment::Profile:
      c.strategies = {Strategy::Equal};
      c.profiles = {Profile::Uniform, Profile::ExponentialDecay, Profile::PowerLaw};
      break;
    case Experiment::Noise:
      c.strategies = {Strategy::Equal};
      c.noise_levels = {{NoiseKind::Gaussian, 0.0},  {NoiseKind::Gaussian, 0.01},
                        {NoiseKind::Gaussian, 0.05}, {NoiseKind::Gaussian, 0.1},
                        {NoiseKind::Sparse, 1.0},    {NoiseKind::Sparse, 10.0}};
      break;
    case Experiment::Threshold:
      c.thresholds = {1.0, 1.5, 2.0, 2.5};
      break;
    case Experiment::Bounds:
      c.m = 50;
      c.d = 100;
      c.r_star = 5;
      c.trials = 20;
      c.strategies = {Strategy::Equal};
      c.total_budget = 20000;
      break;
  }
  return c;
}

void ExperimentConfig::resolve() {
  if (n == 0) n = 2 * d;
  if (r == 0) r = r_star;
}

void ExperimentConfig::validate() const {
  if (m < 1 || d < 1 || r_star < 1) throw ConfigError("dimensions m, d, r_star must be positive");
  if (samples() < d) throw ConfigError("n must be >= d for a full-row-rank design");
  if (r_star > std::min(m, d)) throw ConfigError("r_star must be <= min(m, d)");
  const auto rr = static_cast<Eigen::Index>(rank());
  if (rr < 1 || rr > std::min(m, d)) throw ConfigError("r must be in 1..min(m, d)");
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (!(target_frobenius > 0.0)) throw ConfigError("target_frobenius must be positive");
  noise.validate();
  for (const auto& lvl : noise_levels) NoiseSpec{lvl.kind, lvl.kappa, noise.sparsity}.validate();
  if (strategies.empty()) throw ConfigError("strategies must not be empty");
  for (auto s : strategies) {
    if (s == Strategy::Explicit) throw ConfigError("experiments take Equal, MoreFirst or LessFirst");
  }
  if (mode == SolveMode::Inexact && total_budget < rank()) {
    throw ConfigError("total_budget must be >= r");
  }
  if (experiment == Experiment::Threshold) {
    if (thresholds.empty()) throw ConfigError("thresholds must not be empty");
    for (double t : thresholds) {
      if (!(t > 0.0)) throw ConfigError("thresholds must be positive");
    }
    if (budget_cap < rank()) throw ConfigError("budget_cap must be >= r");
  }
  if (experiment == Experiment::Profile && profiles.empty()) throw ConfigError("profiles must not be empty");
  if (experiment == Experiment::Noise && noise_levels.empty()) {
    throw ConfigError("noise_levels must not be empty");
  }
  if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
  gd.validate();
}

namespace {

json step_json(const std::optional<double>& s) { return s ? json(*s) : json("auto"); }

json to_json(const ExperimentConfig& c) {
  json j;
  j["experiment"] = to_string(c.experiment);
  j["m"] = c.m;
  j["d"] = c.d;
  j["n"] = c.samples();
  j["r_star"] = c.r_star;
  j["r"] = c.rank();
  j["profile"] = to_string(c.profile);
  j["profiles"] = json::array();
  for (auto p : c.profiles) j["profiles"].push_back(to_string(p));
  j["target_frobenius"] = c.target_frobenius;
  j["noise"] = {{"kind", to_string(c.noise.kind)},
                {"kappa", c.noise.kappa},
                {"sparsity", c.noise.sparsity}};
  j["noise_levels"] = json::array();
  for (const auto& l : c.noise_levels) {
    j["noise_levels"].push_back({{"kind", to_string(l.kind)}, {"kappa", l.kappa}});
  }
  j["total_budget"] = c.total_budget;
  j["strategies"] = json::array();
  for (auto s : c.strategies) j["strategies"].push_back(to_string(s));
  j["trials"] = c.trials;
  j["base_seed"] = c.base_seed;
  j["thresholds"] = c.thresholds;
  j["budget_cap"] = c.budget_cap;
  j["mode"] = to_string(c.mode);
  j["gd"] = {{"step_a", step_json(c.gd.step_a)},
             {"step_b", step_json(c.gd.step_b)},
             {"init_scale", c.gd.init_scale},
             {"grad_tol", c.gd.grad_tol}};
  j["output_dir"] = c.output_dir;
  j["workers"] = c.workers;
  return j;
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
T get(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

Eigen::Index get_dim(const json& j, const char* key) {
  const auto v = get<long long>(j, key);
  if (v < 0) throw ConfigError(std::string("'") + key + "' must be >= 0");
  return static_cast<Eigen::Index>(v);
}

std::size_t get_count(const json& j, const char* key) {
  const auto v = get<long long>(j, key);
  if (v < 0) throw ConfigError(std::string("'") + key + "' must be >= 0");
  return static_cast<std::size_t>(v);
}

std::optional<double> get_step(const json& j, const char* key) {
  const json& v = j.at(key);
  if (v.is_string() && v.get<std::string>() == "auto") return std::nullopt;
  if (!v.is_number()) throw ConfigError(std::string("'") + key + "' must be a number or \"auto\"");
  return v.get<double>();
}

SolveMode parse_mode(const std::string& s) {
  if (s == "Exact") return SolveMode::Exact;
  if (s == "Inexact") return SolveMode::Inexact;
  throw ConfigError("unknown mode '" + s + "'");
}

void apply_json(ExperimentConfig& c, const json& j) {
  check_keys(j,
             {"experiment", "m", "d", "n", "r_star", "r", "profile", "profiles", "target_frobenius",
              "noise", "noise_levels", "total_budget", "strategies", "trials", "base_seed",
              "thresholds", "budget_cap", "mode", "gd", "output_dir", "workers"},
             "config");
  if (j.contains("experiment") && parse_experiment(get<std::string>(j, "experiment")) != c.experiment) {
    throw ConfigError("config is for experiment '" + get<std::string>(j, "experiment") +
                      "', not '" + to_string(c.experiment) + "'");
  }
  if (j.contains("m")) c.m = get_dim(j, "m");
  if (j.contains("d")) c.d = get_dim(j, "d");
  if (j.contains("n")) c.n = get_dim(j, "n");
  if (j.contains("r_star")) c.r_star = get_dim(j, "r_star");
  if (j.contains("r")) c.r = get_dim(j, "r");
  if (j.contains("profile")) c.profile = parse_profile(get<std::string>(j, "profile"));
  if (j.contains("profiles")) {
    c.profiles.clear();
    for (const auto& p : get<std::vector<std::string>>(j, "profiles")) c.profiles.push_back(parse_profile(p));
  }
  if (j.contains("target_frobenius")) c.target_frobenius = get<double>(j, "target_frobenius");
  if (j.contains("noise")) {
    const json& nj = j.at("noise");
    check_keys(nj, {"kind", "kappa", "sparsity"}, "noise");
    if (nj.contains("kind")) c.noise.kind = parse_noise_kind(get<std::string>(nj, "kind"));
    if (nj.contains("kappa")) c.noise.kappa = get<double>(nj, "kappa");
    if (nj.contains("sparsity")) c.noise.sparsity = get<double>(nj, "sparsity");
  }
  if (j.contains("noise_levels")) {
    c.noise_levels.clear();
    for (const auto& lj : j.at("noise_levels")) {
      check_keys(lj, {"kind", "kappa"}, "noise_levels entry");
      c.noise_levels.push_back({parse_noise_kind(get<std::string>(lj, "kind")), get<double>(lj, "kappa")});
    }
  }
  if (j.contains("total_budget")) c.total_budget = get_count(j, "total_budget");
  if (j.contains("strategies")) {
    c.strategies.clear();
    for (const auto& s : get<std::vector<std::string>>(j, "strategies")) c.strategies.push_back(parse_strategy(s));
  }
  if (j.contains("trials")) c.trials = get_count(j, "trials");
  if (j.contains("base_seed")) c.base_seed = get<std::uint64_t>(j, "base_seed");
  if (j.contains("thresholds")) c.thresholds = get<std::vector<double>>(j, "thresholds");
  if (j.contains("budget_cap")) c.budget_cap = get_count(j, "budget_cap");
  if (j.contains("mode")) c.mode = parse_mode(get<std::string>(j, "mode"));
  if (j.contains("gd")) {
    const json& g = j.at("gd");
    check_keys(g, {"step_a", "step_b", "init_scale", "grad_tol"}, "gd");
    if (g.contains("step_a")) c.gd.step_a = get_step(g, "step_a");
    if (g.contains("step_b")) c.gd.step_b = get_step(g, "step_b");
    if (g.contains("init_scale")) c.gd.init_scale = get<double>(g, "init_scale");
    if (g.contains("grad_tol")) c.gd.grad_tol = get<double>(g, "grad_tol");
  }
  if (j.contains("output_dir")) c.output_dir = get<std::string>(j, "output_dir");
  if (j.contains("workers")) c.workers = get_count(j, "workers");
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text, Experiment e) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& err) {
    throw ConfigError(std::string("config is not valid JSON: ") + err.what());
  }
  ExperimentConfig c = default_config(e);
  apply_json(c, j);
  c.resolve();
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path, Experiment e) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str(), e);
  } catch (const ConfigError& err) {
    throw ConfigError(path + ": " + err.what());
  }
}

std::string dump_config(const ExperimentConfig& cfg) { return to_json(cfg).dump(2); }

std::string config_hash(const ExperimentConfig& cfg) {
  json j = to_json(cfg);
  j.erase("output_dir");
  j.erase("workers");
  const std::string text = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

}  // namespace seqrank
