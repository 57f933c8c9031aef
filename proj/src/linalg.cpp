#include "seqrank/linalg.hpp"

#include "seqrank/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace seqrank {

namespace {

std::string dims(const DenseMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

void require_finite(const DenseMatrix& m, const char* what) {
  if (!m.allFinite()) {
    throw DimensionError(std::string(what) + " (" + dims(m) + ") contains non-finite entries");
  }
}

SvdResult svd(const DenseMatrix& m) {
  if (m.size() == 0) throw DimensionError("svd of an empty matrix");
  require_finite(m, "svd input");
  Eigen::BDCSVD<DenseMatrix> dec(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (dec.info() != Eigen::Success) {
    throw NumericalError("svd did not converge for a " + dims(m) + " matrix");
  }
  return SvdResult{dec.singularValues(), dec.matrixU(), dec.matrixV()};
}

Vector singular_values(const DenseMatrix& m) {
  if (m.size() == 0) throw DimensionError("singular values of an empty matrix");
  require_finite(m, "svd input");
  Eigen::BDCSVD<DenseMatrix> dec(m);
  if (dec.info() != Eigen::Success) {
    throw NumericalError("svd did not converge for a " + dims(m) + " matrix");
  }
  return dec.singularValues();
}

Eigen::Index numerical_rank(const Vector& sigmas) {
  if (sigmas.size() == 0 || sigmas(0) <= 0.0) return 0;
  const double cut = kRankTolerance * sigmas(0);
  return static_cast<Eigen::Index>(std::count_if(sigmas.begin(), sigmas.end(),
                                                 [cut](double s) { return s > cut; }));
}

Eigen::Index numerical_rank(const DenseMatrix& m) { return numerical_rank(singular_values(m)); }

double spectral_norm(const DenseMatrix& m) {
  if (m.size() == 0) return 0.0;
  return singular_values(m)(0);
}

SingularTriple top_singular_triple(const DenseMatrix& m) {
  const SvdResult s = svd(m);
  if (!(s.singular_values(0) > 0.0)) {
    throw NumericalError("zero matrix has no principal direction");
  }
  return SingularTriple{s.singular_values(0), s.left.col(0), s.right.col(0)};
}

std::pair<Vector, Vector> align_sign(const Vector& candidate_u, const Vector& candidate_v,
                                     const Vector& reference_u, const Vector& reference_v) {
  if (candidate_u.size() != reference_u.size() || candidate_v.size() != reference_v.size()) {
    throw DimensionError("align_sign: candidate and reference lengths differ");
  }
  // ||cu - ru||^2 - ||-cu - ru||^2 = -4 cu.ru, so -1 wins only on a negative inner product.
  const double s = candidate_u.dot(reference_u) < 0.0 ? -1.0 : 1.0;
  return {s * candidate_u, s * candidate_v};
}

double singular_gap_tk(std::span<const double> sigmas, std::size_t k) {
  if (sigmas.empty()) throw DimensionError("singular_gap_tk: empty spectrum");
  if (k < 1 || k > sigmas.size()) throw DimensionError("singular_gap_tk: index out of range");
  return std::min(gap_to_later(sigmas, k), sigmas[k - 1]);
}

double gap_to_later(std::span<const double> sigmas, std::size_t k) {
  if (k < 1 || k > sigmas.size()) throw DimensionError("gap_to_later: index out of range");
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t j = k; j < sigmas.size(); ++j) {
    gap = std::min(gap, std::abs(sigmas[k - 1] - sigmas[j]));
  }
  return gap;
}

double condition_number(const DenseMatrix& m) {
  const Vector s = singular_values(m);
  const double smax = s(0);
  const double smin = s(s.size() - 1);
  if (!(smax > 0.0) || smin <= kRankTolerance * smax) {
    throw NumericalError("condition number undefined: " + dims(m) +
                         " matrix is numerically rank deficient");
  }
  return smax / smin;
}

DenseMatrix truncated_svd_approx(const DenseMatrix& m, Eigen::Index k) {
  const SvdResult s = svd(m);
  k = std::min<Eigen::Index>(k, s.singular_values.size());
  return s.left.leftCols(k) * s.singular_values.head(k).asDiagonal() *
         s.right.leftCols(k).transpose();
}

RowSpace::RowSpace(const DenseMatrix& x) {
  require_finite(x, "design matrix");
  const Eigen::Index d = x.rows();
  const Eigen::Index n = x.cols();
  if (d == 0 || n < d) {
    throw NumericalError("design " + dims(x) + " cannot have full row rank (need cols >= rows)");
  }
  Eigen::HouseholderQR<DenseMatrix> qr(x.transpose());
  q_ = qr.householderQ() * DenseMatrix::Identity(n, d);
  r_ = qr.matrixQR().topRows(d).triangularView<Eigen::Upper>();
  const Vector s = singular_values(r_);
  sigma_max_ = s(0);
  sigma_min_ = s(d - 1);
  if (!(sigma_max_ > 0.0) || sigma_min_ <= kRankTolerance * sigma_max_) {
    throw NumericalError("design " + dims(x) + " is numerically rank deficient");
  }
}

LeastSquaresRow RowSpace::solve_row(const Vector& target) const {
  if (target.size() != q_.rows()) {
    throw DimensionError("least-squares target length does not match design columns");
  }
  const Vector coeffs = q_.transpose() * target;
  LeastSquaresRow out;
  out.a = r_.triangularView<Eigen::Upper>().solve(coeffs);
  out.residual = (target - q_ * coeffs).norm();
  return out;
}

DenseMatrix RowSpace::coordinates(const DenseMatrix& y) const {
  if (y.cols() != q_.rows()) throw DimensionError("label columns do not match design columns");
  return y * q_;
}

LeastSquaresRow least_squares_row(const Vector& target, const DenseMatrix& x) {
  return RowSpace(x).solve_row(target);
}

}  // namespace seqrank
