#pragma once
//
// Dense linear-algebra primitives shared by every other module: SVD and its
// derived spectral quantities, sign alignment of singular vectors, and the
// row-space least-squares solve used to turn a singular triple back into a
// regression factor.
//

#include <Eigen/Dense>

#include <span>
#include <utility>

namespace seqrank {

using DenseMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Relative threshold below which a singular value counts as zero.
inline constexpr double kRankTolerance = 1e-12;

struct SvdResult {
  Vector singular_values;  // non-increasing
  DenseMatrix left;        // m x p, orthonormal columns
  DenseMatrix right;       // n x p, orthonormal columns
};

struct SingularTriple {
  double sigma = 0.0;
  Vector u;
  Vector v;
};

struct LeastSquaresRow {
  Vector a;
  double residual = 0.0;  // || a^T X - target^T ||_2
};

// Throws DimensionError if any entry is NaN or infinite.
void require_finite(const DenseMatrix& m, const char* what);

// Thin SVD (p = min(rows, cols)). Throws NumericalError carrying the
// dimensions if the factorization does not converge.
SvdResult svd(const DenseMatrix& m);

// Singular values only, non-increasing.
Vector singular_values(const DenseMatrix& m);

// Count of singular values above kRankTolerance * sigma_max.
Eigen::Index numerical_rank(const Vector& sigmas);
Eigen::Index numerical_rank(const DenseMatrix& m);

double spectral_norm(const DenseMatrix& m);

// Leading singular triple. Throws NumericalError for the zero matrix.
SingularTriple top_singular_triple(const DenseMatrix& m);

// Applies the single sign s in {+1, -1} minimizing ||s*cu - ru||_2 to both
// candidates; exact ties resolve to +1.
std::pair<Vector, Vector> align_sign(const Vector& candidate_u,
                                     const Vector& candidate_v,
                                     const Vector& reference_u,
                                     const Vector& reference_v);

// Smallest distance from sigma_k to any later singular value, capped at
// sigma_k itself. k is 1-based. For the last index only sigma_k remains.
double singular_gap_tk(std::span<const double> sigmas, std::size_t k);

// min_{j>k} |sigma_k - sigma_j| without the sigma_k cap; +inf when k is the
// last index. k is 1-based.
double gap_to_later(std::span<const double> sigmas, std::size_t k);

// sigma_max / sigma_min over the min(rows, cols) singular values.
double condition_number(const DenseMatrix& m);

// Best rank-k approximation from the truncated SVD.
DenseMatrix truncated_svd_approx(const DenseMatrix& m, Eigen::Index k);

// Factorization of a full-row-rank design X (d x n, n >= d) through the thin
// QR of X^T = Q R. Gives the least-squares solve of a^T X ~ target^T, the
// orthogonal projection onto the row space of X, and the extreme singular
// values of X (those of R).
class RowSpace {
 public:
  explicit RowSpace(const DenseMatrix& x);

  Eigen::Index dim() const { return r_.rows(); }
  Eigen::Index samples() const { return q_.rows(); }

  const DenseMatrix& q() const { return q_; }
  const DenseMatrix& r() const { return r_; }
  double sigma_max() const { return sigma_max_; }
  double sigma_min() const { return sigma_min_; }

  LeastSquaresRow solve_row(const Vector& target) const;

  // Coordinates of the rows of y in the basis Q: y * Q (m x d).
  DenseMatrix coordinates(const DenseMatrix& y) const;

 private:
  DenseMatrix q_;
  DenseMatrix r_;
  double sigma_max_ = 0.0;
  double sigma_min_ = 0.0;
};

// argmin_a || a^T X - target^T ||_2. Throws NumericalError when X is
// numerically rank deficient.
LeastSquaresRow least_squares_row(const Vector& target, const DenseMatrix& x);

}  // namespace seqrank
