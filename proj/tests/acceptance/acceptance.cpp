// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Usage: seqrank_acceptance [--only name[,name...]]

#include "seqrank/analysis.hpp"
#include "seqrank/config.hpp"
#include "seqrank/datagen.hpp"
#include "seqrank/experiments.hpp"
#include "seqrank/random.hpp"
#include "seqrank/solver.hpp"

#include "../support/table.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>

using namespace seqrank;
using namespace seqrank::testing_support;

namespace {

// Tolerances and run sizes.
constexpr double kExactRecoveryTol = 1e-8;
constexpr double kExactRecoverySeconds = 10.0;
constexpr double kSpectrumTol = 1e-8;
constexpr double kMarginTol = -1e-8;
constexpr std::size_t kMinFlagged = 10;
constexpr double kAllocSeconds = 15 * 60.0;
constexpr double kWeylTol = 1e-10;
constexpr double kRecurrenceTol = 1e-12;
constexpr double kPerturbationSeconds = 60.0;
constexpr double kDeltaTarget = 1e-6;
constexpr double kDeltaSlack = 1.10;
constexpr std::size_t kMinThresholdsOrdered = 3;

struct Verdict {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Bundled config for suites whose dimensions are set there rather than by default.
ExperimentConfig bundled(Experiment e) {
  ExperimentConfig c = load_config(SEQRANK_DATA_DIR "/../configs/" + to_string(e) + ".json", e);
  c.resolve();
  return c;
}

// Summary-row value of `column` keyed by the given key columns.
std::map<std::string, std::string> summary(const Rows& rows, const std::vector<std::string>& keys,
                                           const std::string& column) {
  std::map<std::string, std::string> out;
  const std::size_t c = col(rows, column);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i][col(rows, "row_kind")] != "summary") continue;
    std::string key;
    for (const auto& k : keys) key += (key.empty() ? "" : "/") + rows[i][col(rows, k)];
    out[key] = rows[i][c];
  }
  return out;
}

bool all_ok(const Rows& rows) {
  const std::size_t s = col(rows, "status");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i][s] != "ok" && rows[i][s] != "summary") return false;
  }
  return true;
}

Verdict ordered(const std::vector<std::pair<std::string, double>>& chain, bool strict) {
  Verdict v{true, ""};
  for (std::size_t i = 0; i < chain.size(); ++i) {
    if (i > 0) {
      const double a = chain[i - 1].second, b = chain[i].second;
      v.pass = v.pass && (strict ? a < b : a <= b);
      v.detail += strict ? " < " : " <= ";
    }
    v.detail += chain[i].first + " " + fmt("%.4g", chain[i].second);
  }
  return v;
}

// --- criteria ---------------------------------------------------------------

struct ExactRuns {
  double worst_recon = 0.0;
  double worst_spectrum = 0.0;
  double secs = 0.0;
  std::size_t runs = 0;
};

const ExactRuns& exact_runs() {
  static const ExactRuns runs = [] {
    ExactRuns r;
    const auto t0 = Clock::now();
    for (Profile p : {Profile::Uniform, Profile::ExponentialDecay, Profile::PowerLaw}) {
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const GroundTruth gt = generate_w_star(100, 200, 10, p, kDefaultTargetFrobenius,
                                               split_seed(seed, Stream::GroundTruth));
        const Dataset ds = make_dataset(gt, 400, NoiseSpec{}, seed);
        SolveOptions keep;
        keep.keep_deflated = true;
        const SolveTrace t = solve_exact(ds.x, ds.y, 10, keep);
        r.worst_recon = std::max(r.worst_recon, (gt.w_star - reconstruct_w(t)).norm() / gt.w_star.norm());
        const Vector s = singular_values(ds.y);
        for (std::size_t k = 0; k + 1 < 10; ++k) {
          const double want = s(static_cast<Eigen::Index>(k + 1));
          const double got = singular_values(t.deflated[k + 1])(0);
          r.worst_spectrum = std::max(r.worst_spectrum, std::abs(got - want) / want);
        }
        ++r.runs;
      }
    }
    r.secs = seconds_since(t0);
    return r;
  }();
  return runs;
}

Verdict exact_recovery() {
  const ExactRuns& r = exact_runs();
  return {r.worst_recon <= kExactRecoveryTol && r.secs < kExactRecoverySeconds,
          "max rel err " + fmt("%.3g", r.worst_recon) + " over " + std::to_string(r.runs) +
              " noiseless runs (3 profiles), " + fmt("%.1f", r.secs) + " s"};
}

Verdict deflation_spectrum() {
  const ExactRuns& r = exact_runs();
  return {r.worst_spectrum <= kSpectrumTol,
          "max rel mismatch sigma_1(Y_k+1) vs sigma_k+1(Y): " + fmt("%.3g", r.worst_spectrum)};
}

const Rows& bounds_rows() {
  static const Rows rows = parse_csv(run_bounds_experiment(default_config(Experiment::Bounds)).table.str());
  return rows;
}

struct BoundsTally {
  std::size_t applicable = 0, flagged = 0, held = 0;
  double worst = std::numeric_limits<double>::infinity();
};

BoundsTally tally(const std::vector<std::string>& margin_cols) {
  const Rows& rows = bounds_rows();
  BoundsTally t;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i][col(rows, "row_kind")] != "trial" || rows[i][col(rows, "status")] != "ok") continue;
    ++t.applicable;
    if (rows[i][col(rows, "all_conditions")] != "1") continue;
    ++t.flagged;
    bool ok = true;
    for (const auto& c : margin_cols) {
      const double m = std::stod(rows[i][col(rows, c)]);
      t.worst = std::min(t.worst, m);
      ok = ok && m >= kMarginTol;
    }
    t.held += ok;
  }
  return t;
}

Verdict bounds_verdict(const std::vector<std::string>& cols) {
  const BoundsTally t = tally(cols);
  return {t.flagged >= kMinFlagged && t.held == t.flagged,
          std::to_string(t.held) + "/" + std::to_string(t.flagged) + " flagged instances hold (" +
              std::to_string(t.applicable - t.flagged) + " excluded), min margin " + fmt("%.3g", t.worst)};
}

Verdict training_bound() { return bounds_verdict({"thm31_margin"}); }
Verdict reconstruction_bound() { return bounds_verdict({"thm41_total_margin", "min_component_margin"}); }

Verdict allocation_ordering() {
  const auto t0 = Clock::now();
  const Rows rows = parse_csv(run_alloc_experiment(default_config(Experiment::Alloc)).table.str());
  const double secs = seconds_since(t0);
  const auto mean = summary(rows, {"strategy"}, "recon_err");
  Verdict v = ordered({{"MoreFirst", std::stod(mean.at("MoreFirst"))},
                       {"Equal", std::stod(mean.at("Equal"))},
                       {"LessFirst", std::stod(mean.at("LessFirst"))}},
                      true);
  v.pass = v.pass && all_ok(rows) && secs < kAllocSeconds;
  v.detail += ", " + fmt("%.0f", secs) + " s";
  return v;
}

Verdict profile_ordering() {
  const Rows rows = parse_csv(run_profile_experiment(default_config(Experiment::Profile)).table.str());
  const auto mean = summary(rows, {"profile"}, "recon_err");
  Verdict v = ordered({{"PowerLaw", std::stod(mean.at("PowerLaw"))},
                       {"ExponentialDecay", std::stod(mean.at("ExponentialDecay"))},
                       {"Uniform", std::stod(mean.at("Uniform"))}},
                      true);
  v.pass = v.pass && all_ok(rows);
  return v;
}

Verdict noise_monotonicity() {
  const Rows rows = parse_csv(run_noise_experiment(bundled(Experiment::Noise)).table.str());
  const auto mean = summary(rows, {"noise_kind", "kappa"}, "recon_err");
  std::vector<std::pair<std::string, double>> gauss, sparse;
  for (const auto& [key, val] : mean) {
    const auto slash = key.find('/');
    const double kappa = std::stod(key.substr(slash + 1));
    auto& fam = key.substr(0, slash) == "Gaussian" ? gauss : sparse;
    fam.emplace_back(key.substr(0, slash) + "(" + fmt("%g", kappa) + ")", std::stod(val));
  }
  // Map keys sort lexically; the kappa strings happen to sort numerically here,
  // but order by kappa explicitly anyway.
  auto by_kappa = [](const auto& a, const auto& b) {
    return std::stod(a.first.substr(a.first.find('(') + 1)) < std::stod(b.first.substr(b.first.find('(') + 1));
  };
  std::sort(gauss.begin(), gauss.end(), by_kappa);
  std::sort(sparse.begin(), sparse.end(), by_kappa);
  const Verdict g = ordered(gauss, false), s = ordered(sparse, false);
  return {g.pass && s.pass && all_ok(rows) && gauss.size() == 4 && sparse.size() == 2,
          g.detail + "; " + s.detail};
}

Verdict threshold_efficiency() {
  const ExperimentConfig cfg = bundled(Experiment::Threshold);
  const Rows rows = parse_csv(run_threshold_experiment(cfg).table.str());
  const auto mean = summary(rows, {"strategy", "threshold"}, "iters_to_threshold");
  auto value = [&](const std::string& s, double thr) {
    const std::string v = mean.at(s + "/" + format_double(thr));
    return v == kNotReached ? std::numeric_limits<double>::infinity() : std::stod(v);
  };
  std::size_t good = 0;
  std::string detail;
  for (double thr : cfg.thresholds) {
    const double mf = value("MoreFirst", thr), eq = value("Equal", thr), lf = value("LessFirst", thr);
    const bool ok = std::isfinite(mf) && mf <= eq && eq <= lf;
    good += ok;
    detail += (detail.empty() ? "" : "; ") + fmt("%g:", thr) + " " + fmt("%g", mf) + "/" + fmt("%g", eq) +
              "/" + (std::isfinite(lf) ? fmt("%g", lf) : std::string(kNotReached)) + (ok ? "" : " (x)");
  }
  return {good >= kMinThresholdsOrdered,
          std::to_string(good) + "/4 thresholds ordered (MoreFirst/Equal/LessFirst mean iters) " + detail};
}

Verdict perturbation_suites() {
  const auto t0 = Clock::now();
  Rng rng(2024);
  std::size_t weyl_ok = 0, wedin_ok = 0, wedin_cases = 0, rec_ok = 0;
  double worst_weyl = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 100; ++i) {
    const Eigen::Index m = 3 + i % 20, n = 3 + (i * 7) % 25;
    const DenseMatrix a = gaussian_matrix(m, n, rng);
    const DenseMatrix d = gaussian_matrix(m, n, rng, 1e-3 * (1 + i % 10));
    const double w = weyl_check(a, d);
    worst_weyl = std::max(worst_weyl, w);
    weyl_ok += w <= kWeylTol;
  }
  while (wedin_cases < 100) {
    const Eigen::Index m = 3 + static_cast<Eigen::Index>(wedin_cases % 10);
    const Eigen::Index n = 4 + static_cast<Eigen::Index>(wedin_cases % 13);
    const DenseMatrix a = gaussian_matrix(m, n, rng);
    const DenseMatrix d = gaussian_matrix(m, n, rng, 1e-2);
    const WedinResult w = wedin_check(a, d, 1 + static_cast<Eigen::Index>(wedin_cases % 2));
    if (!(w.gap > 0.0)) continue;
    ++wedin_cases;
    wedin_ok += w.lhs <= w.rhs;
  }
  std::uniform_real_distribution<double> coef(0.0, 2.0);
  for (int i = 0; i < 100; ++i) {
    std::vector<double> a(1 + i % 20), b(a.size());
    for (auto& v : a) v = coef(rng);
    for (auto& v : b) v = coef(rng);
    const auto x = iterate_recurrence(a, b), y = unroll_recurrence(a, b);
    bool ok = true;
    for (std::size_t k = 0; k < x.size(); ++k) ok = ok && std::abs(x[k] - y[k]) <= kRecurrenceTol * std::abs(x[k]);
    rec_ok += ok;
  }
  const double secs = seconds_since(t0);
  return {weyl_ok == 100 && wedin_ok == 100 && rec_ok == 100 && secs < kPerturbationSeconds,
          "Weyl " + std::to_string(weyl_ok) + "/100 (worst " + fmt("%.2g", worst_weyl) + "), Wedin " +
              std::to_string(wedin_ok) + "/100, recurrence " + std::to_string(rec_ok) + "/100, " +
              fmt("%.2f", secs) + " s"};
}

Verdict delta_convergence() {
  const GroundTruth gt = generate_w_star(50, 100, 5, Profile::PowerLaw, kDefaultTargetFrobenius,
                                         split_seed(0, Stream::GroundTruth));
  const Dataset ds = make_dataset(gt, 200, NoiseSpec{}, 0);
  const RowSpace rows(ds.x);
  std::vector<double> deltas;
  for (std::size_t budget = 16; budget <= 16384; budget *= 2) {
    const SolveTrace t = solve_inexact(ds.x, ds.y, 1, explicit_allocation({budget}), GdConfig{}, 0);
    deltas.push_back(t.components[0].delta_fro);
  }
  bool mono = true;
  for (std::size_t i = 1; i < deltas.size(); ++i) mono = mono && deltas[i] <= kDeltaSlack * deltas[i - 1];
  return {mono && deltas.back() <= kDeltaTarget,
          "delta_1 " + fmt("%.3g", deltas.front()) + " at 16 -> " + fmt("%.3g", deltas.back()) +
              " at 16384, " + (mono ? "non-increasing" : "increase beyond 10%") + " along 11 budgets"};
}

Verdict determinism() {
  std::vector<ExperimentConfig> cfgs;
  for (Experiment e : {Experiment::Alloc, Experiment::Profile, Experiment::Noise, Experiment::Threshold}) {
    ExperimentConfig c = default_config(e);
    c.m = 40;
    c.d = 60;
    c.n = 0;
    c.r_star = 5;
    c.trials = 3;
    c.total_budget = 2000;
    c.budget_cap = 2000;
    c.resolve();
    cfgs.push_back(c);
  }
  cfgs.push_back(default_config(Experiment::Bounds));
  cfgs.back().resolve();
  std::string detail;
  bool pass = true;
  for (ExperimentConfig c : cfgs) {
    const std::string first = without_timing(run_experiment(c).table.str());
    c.workers = 2;
    const std::string again = without_timing(run_experiment(c).table.str());
    const bool same = first == again;
    pass = pass && same;
    detail += (detail.empty() ? "" : ", ") + to_string(c.experiment) + (same ? " identical" : " DIFFERS");
  }
  return {pass, detail + " (reruns at 1 and 2 workers)"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"exact_recovery", exact_recovery},
      {"deflation_spectrum", deflation_spectrum},
      {"training_bound_validity", training_bound},
      {"reconstruction_bound_validity", reconstruction_bound},
      {"allocation_ordering", allocation_ordering},
      {"profile_ordering", profile_ordering},
      {"noise_monotonicity", noise_monotonicity},
      {"threshold_efficiency", threshold_efficiency},
      {"perturbation_suites", perturbation_suites},
      {"delta_convergence", delta_convergence},
      {"determinism", determinism},
  };
  std::set<std::string> only;
  if (argc == 3 && std::string(argv[1]) == "--only") {
    std::stringstream ss(argv[2]);
    for (std::string s; std::getline(ss, s, ',');) only.insert(s);
  }
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    if (!only.empty() && !only.count(name)) continue;
    const auto t0 = Clock::now();
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    failures += !v.pass;
    std::printf("%s %s: %s [%.1f s]\n", v.pass ? "PASS" : "FAIL", name.c_str(), v.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
