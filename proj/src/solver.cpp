#include "seqrank/solver.hpp"

#include "seqrank/errors.hpp"
#include "seqrank/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace seqrank {

std::string to_string(SolveMode m) { return m == SolveMode::Exact ? "Exact" : "Inexact"; }

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::Equal: return "Equal";
    case Strategy::MoreFirst: return "MoreFirst";
    case Strategy::LessFirst: return "LessFirst";
    case Strategy::Explicit: return "Explicit";
  }
  return "?";
}

Strategy parse_strategy(std::string_view name) {
  if (name == "Equal") return Strategy::Equal;
  if (name == "MoreFirst") return Strategy::MoreFirst;
  if (name == "LessFirst") return Strategy::LessFirst;
  if (name == "Explicit") return Strategy::Explicit;
  throw ConfigError("unknown allocation strategy '" + std::string(name) + "'");
}

std::size_t AllocationPlan::total() const {
  return std::accumulate(budgets.begin(), budgets.end(), std::size_t{0});
}

void GdConfig::validate() const {
  if (step_a && !(*step_a > 0.0 && std::isfinite(*step_a))) throw ConfigError("step_a must be positive");
  if (step_b && !(*step_b > 0.0 && std::isfinite(*step_b))) throw ConfigError("step_b must be positive");
  if (!(init_scale > 0.0 && std::isfinite(init_scale))) throw ConfigError("init_scale must be positive");
  if (!(grad_tol >= 0.0)) throw ConfigError("grad_tol must be >= 0");
}

namespace {

void check_shapes(const DenseMatrix& yk, Eigen::Index samples, const char* what) {
  if (yk.cols() != samples) {
    throw DimensionError(std::string(what) + ": label columns (" + std::to_string(yk.cols()) +
                         ") do not match design columns (" + std::to_string(samples) + ")");
  }
}

// The minimizer from the coordinates M = Y_k Q of Y_k in the row space of X:
// with (s, u, w) the top triple of M, b = u and a = s R^{-1} w.
Rank1Pair exact_from_coords(const DenseMatrix& coords, const RowSpace& rows, double* sigma) {
  const SingularTriple t = top_singular_triple(coords);
  if (sigma) *sigma = t.sigma;
  Rank1Pair p;
  p.b = t.u;
  p.a = rows.r().triangularView<Eigen::Upper>().solve(t.sigma * t.v);
  return p;
}

// Leading singular value by power iteration on M^T M from a fixed start.
double power_sigma(const DenseMatrix& m, int iters = 50) {
  if (m.size() == 0) return 0.0;
  Vector v = Vector::Ones(m.cols()) / std::sqrt(static_cast<double>(m.cols()));
  double est = 0.0;
  for (int i = 0; i < iters; ++i) {
    const Vector w = m * v;
    est = w.norm();
    if (!(est > 0.0)) return 0.0;
    v = m.transpose() * w;
    const double nv = v.norm();
    if (!(nv > 0.0)) return est;
    v /= nv;
  }
  return (m * v).norm();
}

// GD on 1/2 ||Y_k - b a^T X||^2 written through G = X X^T and C = Y_k X^T:
//   grad_a = G a |b|^2 - C^T b,   grad_b = b (a^T G a) - C a.
GdResult gd_core(const DenseMatrix& gram, const DenseMatrix& cross, double sigma_max,
                 double sigma_min, double coords_sigma, const GdConfig& config,
                 std::uint64_t seed) {
  config.validate();
  const Eigen::Index d = gram.rows();
  const Eigen::Index m = cross.rows();
  Rng rng(seed);
  GdResult out;
  out.a = gaussian_vector(d, rng, config.init_scale);
  out.b = gaussian_vector(m, rng, config.init_scale);

  const double a0 = out.a.norm();
  const double b0 = out.b.norm();
  const double scale = std::max({a0 * b0, 1.0, coords_sigma / sigma_min});
  const double auto_step = 1.0 / (2.0 * sigma_max * sigma_max * scale);
  out.step_a = config.step_a.value_or(auto_step);
  out.step_b = config.step_b.value_or(auto_step);

  const double limit_a = 1e8 * std::max(a0, 1.0);
  const double limit_b = 1e8 * std::max(b0, 1.0);
  Vector& a = out.a;
  Vector& b = out.b;
  for (std::size_t t = 0; t < config.max_iters; ++t) {
    const Vector ga_part = gram * a;
    const Vector grad_a = ga_part * b.squaredNorm() - cross.transpose() * b;
    const Vector grad_b = b * a.dot(ga_part) - cross * a;
    if (grad_a.norm() <= config.grad_tol && grad_b.norm() <= config.grad_tol) break;
    a -= out.step_a * grad_a;
    b -= out.step_b * grad_b;
    ++out.iters_used;
    const double na = a.norm();
    const double nb = b.norm();
    if (!std::isfinite(na) || !std::isfinite(nb) || na > limit_a || nb > limit_b) {
      std::ostringstream msg;
      msg.precision(6);
      msg << "rank-1 gradient descent diverged at iteration " << out.iters_used
          << " (step_a=" << out.step_a << ", step_b=" << out.step_b << ")";
      throw NumericalError(msg.str());
    }
  }
  return out;
}

double delta_against(const Rank1Pair& exact, const Vector& a, const Vector& b) {
  return (b * a.transpose() - exact.b * exact.a.transpose()).norm();
}

void deflate(DenseMatrix& yk, const DenseMatrix& x, const Vector& a, const Vector& b) {
  yk.noalias() -= b * (x.transpose() * a).transpose();
}

}  // namespace

Rank1Pair best_rank1_exact(const DenseMatrix& yk, const RowSpace& rows) {
  check_shapes(yk, rows.samples(), "best_rank1_exact");
  require_finite(yk, "labels");
  return exact_from_coords(rows.coordinates(yk), rows, nullptr);
}

Rank1Pair best_rank1_exact(const DenseMatrix& yk, const DenseMatrix& x) {
  return best_rank1_exact(yk, RowSpace(x));
}

SolveTrace solve_exact(const DenseMatrix& x, const DenseMatrix& y, std::size_t r,
                       const SolveOptions& options) {
  if (r < 1) throw DimensionError("solve_exact: r must be >= 1");
  const RowSpace rows(x);
  check_shapes(y, rows.samples(), "solve_exact");
  require_finite(y, "labels");

  SolveTrace trace;
  trace.mode = SolveMode::Exact;
  trace.y_fro_initial = y.norm();
  DenseMatrix yk = y;
  if (options.keep_deflated) trace.deflated.push_back(yk);
  double first_sigma = 0.0;
  for (std::size_t k = 0; k < r; ++k) {
    RankOneComponent c;
    const DenseMatrix coords = rows.coordinates(yk);
    double sigma = 0.0;
    if (k == 0) {
      const Rank1Pair p = exact_from_coords(coords, rows, &first_sigma);
      c.a = p.a;
      c.b = p.b;
    } else if (trace.exhausted || coords.norm() <= kRankTolerance * first_sigma) {
      trace.exhausted = true;
      c.a = Vector::Zero(x.rows());
      c.b = Vector::Zero(y.rows());
    } else {
      const Rank1Pair p = exact_from_coords(coords, rows, &sigma);
      c.a = p.a;
      c.b = p.b;
    }
    deflate(yk, x, c.a, c.b);
    c.residual_fro_after = yk.norm();
    trace.components.push_back(std::move(c));
    if (options.keep_deflated) trace.deflated.push_back(yk);
  }
  return trace;
}

GdResult rank1_gd(const DenseMatrix& yk, const DenseMatrix& x, const GdConfig& config,
                  std::uint64_t seed) {
  const RowSpace rows(x);
  check_shapes(yk, rows.samples(), "rank1_gd");
  require_finite(yk, "labels");
  const DenseMatrix coords = rows.coordinates(yk);
  const DenseMatrix gram = rows.r().transpose() * rows.r();
  const DenseMatrix cross = coords * rows.r();
  return gd_core(gram, cross, rows.sigma_max(), rows.sigma_min(), power_sigma(coords), config,
                 seed);
}

double measure_delta(const DenseMatrix& yk, const RowSpace& rows, const Vector& a,
                     const Vector& b) {
  if (a.size() != rows.dim() || b.size() != yk.rows()) {
    throw DimensionError("measure_delta: factor lengths do not match (Y_k, X)");
  }
  return delta_against(best_rank1_exact(yk, rows), a, b);
}

double measure_delta(const DenseMatrix& yk, const DenseMatrix& x, const Vector& a,
                     const Vector& b) {
  return measure_delta(yk, RowSpace(x), a, b);
}

AllocationPlan make_allocation(Strategy strategy, std::size_t r, std::size_t total) {
  if (r < 1) throw DimensionError("make_allocation: r must be >= 1");
  if (total < r) {
    throw DimensionError("make_allocation: total budget " + std::to_string(total) +
                         " is smaller than r = " + std::to_string(r));
  }
  AllocationPlan plan;
  plan.strategy = strategy;
  plan.budgets.assign(r, 0);
  switch (strategy) {
    case Strategy::Equal:
      for (std::size_t k = 0; k < r; ++k) plan.budgets[k] = total / r + (k < total % r ? 1 : 0);
      return plan;
    case Strategy::Explicit:
      throw DimensionError("make_allocation: use explicit_allocation for explicit budgets");
    case Strategy::MoreFirst:
    case Strategy::LessFirst:
      break;
  }
  const double weight_sum = static_cast<double>(r * (r + 1) / 2);
  for (std::size_t k = 0; k < r; ++k) {
    const double share = static_cast<double>(total) * static_cast<double>(r - k) / weight_sum;
    plan.budgets[k] = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(share)));
  }
  auto sum = static_cast<long long>(plan.total());
  const auto target = static_cast<long long>(total);
  for (std::size_t k = 0; sum != target; k = (k + 1) % r) {
    if (sum < target) {
      ++plan.budgets[k];
      ++sum;
    } else if (plan.budgets[k] > 1) {
      --plan.budgets[k];
      --sum;
    }
  }
  if (strategy == Strategy::LessFirst) std::reverse(plan.budgets.begin(), plan.budgets.end());
  return plan;
}

AllocationPlan explicit_allocation(std::vector<std::size_t> budgets) {
  if (budgets.empty()) throw DimensionError("explicit_allocation: empty budget list");
  AllocationPlan plan;
  plan.strategy = Strategy::Explicit;
  plan.budgets = std::move(budgets);
  return plan;
}

SolveTrace solve_inexact(const DenseMatrix& x, const DenseMatrix& y, std::size_t r,
                         const AllocationPlan& plan, const GdConfig& config, std::uint64_t seed,
                         const SolveOptions& options) {
  if (r < 1) throw DimensionError("solve_inexact: r must be >= 1");
  if (plan.budgets.size() != r) {
    throw DimensionError("solve_inexact: plan has " + std::to_string(plan.budgets.size()) +
                         " budgets for r = " + std::to_string(r));
  }
  config.validate();
  const RowSpace rows(x);
  check_shapes(y, rows.samples(), "solve_inexact");
  require_finite(y, "labels");
  const DenseMatrix gram = rows.r().transpose() * rows.r();
  const std::uint64_t gd_seed = split_seed(seed, Stream::GdInit);

  SolveTrace trace;
  trace.mode = SolveMode::Inexact;
  trace.allocation = plan;
  trace.y_fro_initial = y.norm();
  DenseMatrix yk = y;
  if (options.keep_deflated) trace.deflated.push_back(yk);
  for (std::size_t k = 0; k < r; ++k) {
    const DenseMatrix coords = rows.coordinates(yk);
    GdConfig step = config;
    step.max_iters = plan.budgets[k];
    const GdResult gd = gd_core(gram, coords * rows.r(), rows.sigma_max(), rows.sigma_min(),
                                power_sigma(coords), step, split_seed(gd_seed, k + 1));
    RankOneComponent c;
    c.a = gd.a;
    c.b = gd.b;
    c.iters_used = gd.iters_used;
    if (options.measure_delta) {
      c.delta_fro = coords.norm() > 0.0
                        ? delta_against(exact_from_coords(coords, rows, nullptr), c.a, c.b)
                        : (c.b * c.a.transpose()).norm();
    } else {
      c.delta_fro = std::numeric_limits<double>::quiet_NaN();
    }
    deflate(yk, x, c.a, c.b);
    c.residual_fro_after = yk.norm();
    trace.components.push_back(std::move(c));
    if (options.keep_deflated) trace.deflated.push_back(yk);
  }
  return trace;
}

DenseMatrix reconstruct_w(const SolveTrace& trace) {
  if (trace.components.empty()) throw DimensionError("reconstruct_w: empty trace");
  const auto& first = trace.components.front();
  DenseMatrix w = DenseMatrix::Zero(first.b.size(), first.a.size());
  for (const auto& c : trace.components) w.noalias() += c.b * c.a.transpose();
  return w;
}

DenseMatrix reconstruct_labels(const SolveTrace& trace, const DenseMatrix& x) {
  const DenseMatrix w = reconstruct_w(trace);
  if (w.cols() != x.rows()) throw DimensionError("reconstruct_labels: design rows do not match");
  return w * x;
}

}  // namespace seqrank
