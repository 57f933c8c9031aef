#pragma once
//
// Error-propagation bounds for inexact sequential rank-1 regression, plus
// small perturbation-theory checkers used as test oracles.
//
// Gaps are evaluated per factor: the propagation products are
//   prod_{j=k'+1}^{k} (2 + 6 sigma_j / T_j),  T_j = min(min_{i>j} |sigma_j - sigma_i|, sigma_j)
// over the full singular spectrum of Y.
//

#include "seqrank/linalg.hpp"
#include "seqrank/solver.hpp"

#include <optional>
#include <string>
#include <vector>

namespace seqrank {

struct BoundInputs {
  std::vector<double> sigmas_y;    // full spectrum of Y, non-increasing
  std::vector<double> delta_fros;  // ||delta_k||_F for k = 0..r, delta_0 = 0
  double sigma_max_x = 0.0;
  double sigma_min_x = 0.0;
  std::size_t r = 0;
  std::size_t p = 0;               // rank of Y
  std::size_t r_star = 0;          // planted rank; 0 means "use p"
  std::vector<double> sigmas_w;    // spectrum of W*, for the noisy reconstruction term

  void validate() const;
  std::size_t planted_rank() const { return r_star == 0 ? p : r_star; }
  double kappa_x() const;
};

// Parameters of the noise-dependent term that is kept symbolic (its
// constants are not specified, so no number is attached to it).
struct SymbolicNoiseTerm {
  double noise_scale = 0.0;
  std::size_t samples = 0;
  std::size_t r = 0;
  double t_min_star = 0.0;
  std::string failure_probability = "gamma";
};

struct BoundReport {
  std::string gap_form = "per-factor";
  std::vector<double> tk_star;             // T_1 .. T_r
  std::vector<double> e_of_k;              // E(1) .. E(r)
  std::vector<bool> condition_ok;          // length r
  double thm31_rhs = 0.0;                  // training error bound
  std::vector<double> thm41_component_rhs; // per-component reconstruction bound
  double thm41_total_rhs = 0.0;            // total reconstruction bound
  double thm42_teal_rhs = 0.0;             // deterministic part of the noisy bound
  std::optional<SymbolicNoiseTerm> noise_term;
  double observed_training_err = 0.0;
  double observed_recon_err = 0.0;
  std::vector<double> observed_component_errs;

  bool all_conditions_hold() const;
};

// T_j for j = 1..r. Throws NumericalError("degenerate gap ...") when some
// T_j is zero relative to sigma_1.
std::vector<double> gap_list(const BoundInputs& in, std::size_t upto);

// E(k) = sigma_max(X) sum_{k'=0}^{k-1} delta_{k'} prod_{j=k'+1}^{k-1} (6 sigma_j / T_j + 2).
double compute_e_of_k(const BoundInputs& in, std::size_t k);

struct TrainingBound {
  double rhs = 0.0;
  std::vector<bool> conditions;  // E(k) < 1/2 min_{j>k} |sigma_k - sigma_j|
};
TrainingBound thm31_training_bound(const BoundInputs& in);

struct ReconstructionBounds {
  std::vector<double> component_rhs;
  double total_rhs = 0.0;
};
ReconstructionBounds thm41_bounds(const BoundInputs& in, double kappa_x);

double thm42_teal_bound(const BoundInputs& in, double kappa_x);

// Everything above in one report; observed_* fields are left for the caller.
BoundReport evaluate_bounds(const BoundInputs& in);

// max_i (|sigma_i(M + D) - sigma_i(M)| - ||D||_2); <= 0 when the inequality holds.
double weyl_check(const DenseMatrix& m, const DenseMatrix& delta);

struct WedinResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;  // rhs is +inf when gap <= 0
};
WedinResult wedin_check(const DenseMatrix& m, const DenseMatrix& delta, Eigen::Index r_block);

// Closed form Q_k = sum_{k'=0}^{k-1} b_{k'} prod_{j=k'+1}^{k-1} a_j for k = 1..L.
std::vector<double> unroll_recurrence(const std::vector<double>& a, const std::vector<double>& b);
// Same values from Q_0 = 0, Q_{k+1} = a_k Q_k + b_k.
std::vector<double> iterate_recurrence(const std::vector<double>& a, const std::vector<double>& b);

// For each k: ||Y_k - Y*_k|| + ||b* a*^T X - b_bar a_bar^T X|| + ||delta_k X||
// minus ||Y_{k+1} - Y*_{k+1}||, where the starred run is exact and (a_bar, b_bar)
// is the exact minimizer at the inexact Y_k. Both traces must retain Y_k.
std::vector<double> lemma2_check(const SolveTrace& exact, const SolveTrace& inexact,
                                 const DenseMatrix& x);

// delta list 0, delta_1, .., delta_r from a trace.
std::vector<double> delta_list(const SolveTrace& trace);

}  // namespace seqrank
