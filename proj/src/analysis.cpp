#include "seqrank/analysis.hpp"

#include "seqrank/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace seqrank {

void BoundInputs::validate() const {
  if (r < 1) throw DimensionError("bound inputs: r must be >= 1");
  if (sigmas_y.size() < r) throw DimensionError("bound inputs: spectrum shorter than r");
  if (delta_fros.size() != r + 1) {
    throw DimensionError("bound inputs: need r + 1 delta norms (delta_0 .. delta_r)");
  }
  for (double d : delta_fros) {
    if (!(d >= 0.0) || !std::isfinite(d)) throw DimensionError("bound inputs: delta norms must be finite and >= 0");
  }
  if (!std::is_sorted(sigmas_y.rbegin(), sigmas_y.rend())) {
    throw DimensionError("bound inputs: spectrum must be non-increasing");
  }
  if (p > sigmas_y.size()) throw DimensionError("bound inputs: p exceeds spectrum length");
  if (!(sigma_max_x > 0.0)) throw DimensionError("bound inputs: sigma_max(X) must be positive");
}

double BoundInputs::kappa_x() const {
  if (!(sigma_min_x > 0.0)) throw NumericalError("condition number of a singular design");
  return sigma_max_x / sigma_min_x;
}

bool BoundReport::all_conditions_hold() const {
  return std::all_of(condition_ok.begin(), condition_ok.end(), [](bool b) { return b; });
}

std::vector<double> gap_list(const BoundInputs& in, std::size_t upto) {
  std::vector<double> t(upto);
  const double floor = kRankTolerance * (in.sigmas_y.empty() ? 0.0 : in.sigmas_y.front());
  for (std::size_t j = 1; j <= upto; ++j) {
    t[j - 1] = singular_gap_tk(in.sigmas_y, j);
    if (!(t[j - 1] > floor)) {
      throw NumericalError("degenerate gap: T_" + std::to_string(j) +
                           " is zero (repeated or vanishing singular value)");
    }
  }
  return t;
}

namespace {

// factor[j-1] = 2 + 6 sigma_j / T_j for j = 1..upto.
std::vector<double> factors(const BoundInputs& in, std::size_t upto) {
  const std::vector<double> t = gap_list(in, upto);
  std::vector<double> f(upto);
  for (std::size_t j = 1; j <= upto; ++j) f[j - 1] = 2.0 + 6.0 * in.sigmas_y[j - 1] / t[j - 1];
  return f;
}

// sum_{k'=0}^{k} delta_{k'} prod_{j=k'+1}^{k} f_j
double propagated(const std::vector<double>& delta, const std::vector<double>& f, std::size_t k) {
  double total = 0.0;
  for (std::size_t kp = 0; kp <= k; ++kp) {
    double prod = 1.0;
    for (std::size_t j = kp + 1; j <= k; ++j) prod *= f[j - 1];
    total += delta[kp] * prod;
  }
  return total;
}

double double_sum(const BoundInputs& in, const std::vector<double>& f) {
  double s = 0.0;
  for (std::size_t k = 1; k <= in.r; ++k) s += propagated(in.delta_fros, f, k);
  return s;
}

double tail_sum(const std::vector<double>& sigmas, std::size_t from, std::size_t to) {
  double s = 0.0;
  for (std::size_t k = from; k <= to && k <= sigmas.size(); ++k) s += sigmas[k - 1];
  return s;
}

}  // namespace

double compute_e_of_k(const BoundInputs& in, std::size_t k) {
  in.validate();
  if (k < 1 || k > in.r) throw DimensionError("compute_e_of_k: k must be in 1..r");
  const std::vector<double> f = factors(in, k - 1);
  return in.sigma_max_x * propagated(in.delta_fros, f, k - 1);
}

TrainingBound thm31_training_bound(const BoundInputs& in) {
  in.validate();
  const std::vector<double> f = factors(in, in.r);
  TrainingBound out;
  out.rhs = tail_sum(in.sigmas_y, in.r + 1, in.p) + in.sigma_max_x * double_sum(in, f);
  for (std::size_t k = 1; k <= in.r; ++k) {
    const double e = in.sigma_max_x * propagated(in.delta_fros, f, k - 1);
    out.conditions.push_back(e < 0.5 * gap_to_later(in.sigmas_y, k));
  }
  return out;
}

ReconstructionBounds thm41_bounds(const BoundInputs& in, double kappa_x) {
  in.validate();
  if (!(in.sigma_min_x > 0.0)) throw NumericalError("reconstruction bound needs sigma_min(X) > 0");
  const std::vector<double> f = factors(in, in.r);
  ReconstructionBounds out;
  for (std::size_t k = 1; k <= in.r; ++k) {
    out.component_rhs.push_back(kappa_x * propagated(in.delta_fros, f, k));
  }
  out.total_rhs = tail_sum(in.sigmas_y, in.r + 1, in.planted_rank()) / in.sigma_min_x +
                  kappa_x * double_sum(in, f);
  return out;
}

double thm42_teal_bound(const BoundInputs& in, double kappa_x) {
  in.validate();
  const std::vector<double> f = factors(in, in.r);
  return kappa_x * (tail_sum(in.sigmas_w, in.r + 1, in.planted_rank()) + double_sum(in, f));
}

BoundReport evaluate_bounds(const BoundInputs& in) {
  in.validate();
  BoundReport rep;
  rep.tk_star = gap_list(in, in.r);
  for (std::size_t k = 1; k <= in.r; ++k) rep.e_of_k.push_back(compute_e_of_k(in, k));
  const TrainingBound t = thm31_training_bound(in);
  rep.thm31_rhs = t.rhs;
  rep.condition_ok = t.conditions;
  const double kappa = in.kappa_x();
  const ReconstructionBounds rb = thm41_bounds(in, kappa);
  rep.thm41_component_rhs = rb.component_rhs;
  rep.thm41_total_rhs = rb.total_rhs;
  rep.thm42_teal_rhs = thm42_teal_bound(in, kappa);
  return rep;
}

double weyl_check(const DenseMatrix& m, const DenseMatrix& delta) {
  if (m.rows() != delta.rows() || m.cols() != delta.cols()) {
    throw DimensionError("weyl_check: shapes differ");
  }
  const Vector s = singular_values(m);
  const Vector st = singular_values(m + delta);
  const double norm = spectral_norm(delta);
  double worst = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < s.size(); ++i) worst = std::max(worst, std::abs(st(i) - s(i)) - norm);
  return worst;
}

WedinResult wedin_check(const DenseMatrix& m, const DenseMatrix& delta, Eigen::Index r_block) {
  if (m.rows() != delta.rows() || m.cols() != delta.cols()) {
    throw DimensionError("wedin_check: shapes differ");
  }
  const SvdResult a = svd(m);
  const SvdResult b = svd(m + delta);
  const Eigen::Index p = a.singular_values.size();
  if (r_block < 1 || r_block > p) throw DimensionError("wedin_check: r_block out of range");

  const DenseMatrix u1 = a.left.leftCols(r_block);
  const DenseMatrix v1 = a.right.leftCols(r_block);
  const DenseMatrix ut = b.left.leftCols(r_block);
  const DenseMatrix vt = b.right.leftCols(r_block);

  WedinResult out;
  out.lhs = (ut - u1 * (u1.transpose() * ut)).squaredNorm() +
            (vt - v1 * (v1.transpose() * vt)).squaredNorm();
  double gap = a.singular_values.head(r_block).minCoeff();
  for (Eigen::Index i = 0; i < r_block; ++i) {
    for (Eigen::Index j = r_block; j < p; ++j) {
      gap = std::min(gap, std::abs(a.singular_values(i) - b.singular_values(j)));
    }
  }
  out.gap = gap;
  const double num = (u1.transpose() * delta).squaredNorm() + (delta * v1).squaredNorm();
  out.rhs = gap > 0.0 ? num / (gap * gap) : std::numeric_limits<double>::infinity();
  return out;
}

namespace {

void check_coeffs(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw DimensionError("recurrence: coefficient lists differ in length");
  auto negative = [](double v) { return !(v >= 0.0); };
  if (std::any_of(a.begin(), a.end(), negative) || std::any_of(b.begin(), b.end(), negative)) {
    throw DimensionError("recurrence: coefficients must be non-negative");
  }
}

}  // namespace

std::vector<double> unroll_recurrence(const std::vector<double>& a, const std::vector<double>& b) {
  check_coeffs(a, b);
  std::vector<double> q(a.size());
  for (std::size_t k = 1; k <= a.size(); ++k) {
    double s = 0.0;
    for (std::size_t kp = 0; kp < k; ++kp) {
      double prod = 1.0;
      for (std::size_t j = kp + 1; j < k; ++j) prod *= a[j];
      s += b[kp] * prod;
    }
    q[k - 1] = s;
  }
  return q;
}

std::vector<double> iterate_recurrence(const std::vector<double>& a, const std::vector<double>& b) {
  check_coeffs(a, b);
  std::vector<double> q(a.size());
  double prev = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    prev = a[k] * prev + b[k];
    q[k] = prev;
  }
  return q;
}

std::vector<double> lemma2_check(const SolveTrace& exact, const SolveTrace& inexact,
                                 const DenseMatrix& x) {
  const std::size_t r = inexact.components.size();
  if (exact.components.size() != r) throw DimensionError("lemma2_check: traces differ in length");
  if (exact.deflated.size() != r + 1 || inexact.deflated.size() != r + 1) {
    throw DimensionError("lemma2_check: both traces must retain every deflated Y_k");
  }
  if (exact.deflated.front().rows() != inexact.deflated.front().rows() ||
      exact.deflated.front().cols() != inexact.deflated.front().cols() ||
      (exact.deflated.front() - inexact.deflated.front()).norm() != 0.0) {
    throw DimensionError("lemma2_check: traces were not run on the same labels");
  }
  const RowSpace rows(x);
  std::vector<double> margins;
  for (std::size_t k = 0; k < r; ++k) {
    const auto& ce = exact.components[k];
    const auto& ci = inexact.components[k];
    const DenseMatrix& yk = inexact.deflated[k];
    const Rank1Pair bar = yk.norm() > 0.0 ? best_rank1_exact(yk, rows)
                                          : Rank1Pair{Vector::Zero(x.rows()), Vector::Zero(yk.rows())};
    const double before = (yk - exact.deflated[k]).norm();
    const double after = (inexact.deflated[k + 1] - exact.deflated[k + 1]).norm();
    const double step = ((ce.b * ce.a.transpose() - bar.b * bar.a.transpose()) * x).norm();
    const double err = ((ci.b * ci.a.transpose() - bar.b * bar.a.transpose()) * x).norm();
    margins.push_back(before + step + err - after);
  }
  return margins;
}

std::vector<double> delta_list(const SolveTrace& trace) {
  std::vector<double> out{0.0};
  for (const auto& c : trace.components) out.push_back(c.delta_fro);
  return out;
}

}  // namespace seqrank
