#pragma once
//
// Sequential rank-1 regression by deflation.
//
//   Y_1 = Y;  (a_k, b_k) = rank1(Y_k, X);  Y_{k+1} = Y_k - b_k a_k^T X
//
// solve_exact uses the closed-form minimizer of each rank-1 subproblem,
// solve_inexact runs a budgeted gradient-descent subroutine instead and
// records how far each step lands from that minimizer.
//

#include "seqrank/linalg.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace seqrank {

enum class SolveMode { Exact, Inexact };
enum class Strategy { Equal, MoreFirst, LessFirst, Explicit };

std::string to_string(SolveMode m);
std::string to_string(Strategy s);
Strategy parse_strategy(std::string_view name);

struct Rank1Pair {
  Vector a;  // length d
  Vector b;  // length m
};

struct RankOneComponent {
  Vector a;
  Vector b;
  double delta_fro = 0.0;           // || b a^T - b_bar a_bar^T ||_F
  std::size_t iters_used = 0;
  double residual_fro_after = 0.0;  // || Y_{k+1} ||_F
};

struct AllocationPlan {
  Strategy strategy = Strategy::Equal;
  std::vector<std::size_t> budgets;

  std::size_t total() const;
};

struct GdConfig {
  std::optional<double> step_a;  // nullopt: resolved automatically per call
  std::optional<double> step_b;
  double init_scale = 1e-2;
  std::size_t max_iters = 100;
  double grad_tol = 0.0;

  void validate() const;
};

struct GdResult {
  Vector a;
  Vector b;
  std::size_t iters_used = 0;
  double step_a = 0.0;
  double step_b = 0.0;
};

struct SolveOptions {
  // Retain Y_1 .. Y_{r+1}; needed by the propagation checks.
  bool keep_deflated = false;
  // Compute delta_fro for each inexact step (one SVD per step).
  bool measure_delta = true;
};

struct SolveTrace {
  std::vector<RankOneComponent> components;
  SolveMode mode = SolveMode::Exact;
  double y_fro_initial = 0.0;
  std::optional<AllocationPlan> allocation;
  // Set when Y_k became numerically zero before r components were found;
  // the remaining components are zero pairs.
  bool exhausted = false;
  std::vector<DenseMatrix> deflated;
};

// Exact minimizer of 1/2 ||Y_k - b a^T X||_F^2. b is the leading left
// singular vector of Y_k restricted to the row space of X (unit norm), a
// carries the magnitude. Throws NumericalError for zero Y_k or rank-deficient X.
Rank1Pair best_rank1_exact(const DenseMatrix& yk, const DenseMatrix& x);
Rank1Pair best_rank1_exact(const DenseMatrix& yk, const RowSpace& rows);

SolveTrace solve_exact(const DenseMatrix& x, const DenseMatrix& y, std::size_t r,
                       const SolveOptions& options = {});

// Gradient descent on 1/2 ||Y_k - b a^T X||_F^2 from a random N(0, init_scale^2)
// start, both factors updated simultaneously from the previous iterate.
// An automatic step is 1 / (2 sigma_max(X)^2 max(|a0||b0|, s)) where s bounds
// the factor product at the minimizer (estimated sigma_1(Y_k P_X) / sigma_min(X)).
GdResult rank1_gd(const DenseMatrix& yk, const DenseMatrix& x, const GdConfig& config,
                  std::uint64_t seed);

// || b a^T - b_bar a_bar^T ||_F against the exact minimizer for (Y_k, X).
double measure_delta(const DenseMatrix& yk, const DenseMatrix& x, const Vector& a,
                     const Vector& b);
double measure_delta(const DenseMatrix& yk, const RowSpace& rows, const Vector& a,
                     const Vector& b);

// Split of `total` iterations across r components. Equal: floor(T/r) with the
// remainder on the earliest components. MoreFirst: linear ramp proportional to
// r-k+1. LessFirst: MoreFirst reversed.
AllocationPlan make_allocation(Strategy strategy, std::size_t r, std::size_t total);
// Budgets passed through unchanged (zero budgets allowed).
AllocationPlan explicit_allocation(std::vector<std::size_t> budgets);

SolveTrace solve_inexact(const DenseMatrix& x, const DenseMatrix& y, std::size_t r,
                         const AllocationPlan& plan, const GdConfig& config, std::uint64_t seed,
                         const SolveOptions& options = {});

// Sum_k b_k a_k^T (m x d).
DenseMatrix reconstruct_w(const SolveTrace& trace);

// Sum_k b_k a_k^T X (m x n).
DenseMatrix reconstruct_labels(const SolveTrace& trace, const DenseMatrix& x);

}  // namespace seqrank
