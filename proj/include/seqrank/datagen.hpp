#pragma once
//
// Synthetic low-rank regression instances: a planted W* with a chosen
// singular-value profile, a Gaussian row-normalized design X, and labels
// Y = W* X + E under one of three noise models.
//

#include "seqrank/linalg.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace seqrank {

enum class Profile { Uniform, ExponentialDecay, PowerLaw };

enum class NoiseKind { Noiseless, Gaussian, Sparse };

struct NoiseSpec {
  NoiseKind kind = NoiseKind::Noiseless;
  double kappa = 0.0;  // standard deviation of each nonzero noise entry
  double sparsity = 0.05;

  void validate() const;
};

struct GroundTruth {
  DenseMatrix w_star;           // m x d
  std::vector<double> sigmas;   // planted, non-increasing, length rank
  Eigen::Index rank = 0;
  Profile profile = Profile::Uniform;
};

struct Dataset {
  DenseMatrix x;       // d x n
  DenseMatrix y;       // m x n
  DenseMatrix y_star;  // W* x
  NoiseSpec noise;
  std::uint64_t seed = 0;
  std::size_t corrupted_entries = 0;
};

inline constexpr double kDefaultTargetFrobenius = 100.0;

std::string to_string(Profile p);
std::string to_string(NoiseKind k);
Profile parse_profile(std::string_view name);
NoiseKind parse_noise_kind(std::string_view name);

// Uniform: all 10. ExponentialDecay: 100 * 0.01^((i-1)/(r-1)), [100] when
// r = 1. PowerLaw: 100 / i^2.
std::vector<double> planted_sigmas(Profile profile, std::size_t r_star);

// Rescales so that sqrt(sum sigma_i^2) == target_fro.
std::vector<double> normalize_frobenius(const std::vector<double>& sigmas, double target_fro);

// W* = U diag(sigma) V^T with U, V the Q factors of Gaussian matrices.
GroundTruth generate_w_star(Eigen::Index m, Eigen::Index d, Eigen::Index r_star, Profile profile,
                            double target_fro, std::uint64_t seed);

// The raw N(0,1) draw that sample_x normalizes, exposed for checking.
DenseMatrix sample_gaussian(Eigen::Index d, Eigen::Index n, std::uint64_t seed);

// Standard normal entries, then every row scaled to unit Euclidean norm.
DenseMatrix sample_x(Eigen::Index d, Eigen::Index n, std::uint64_t seed);

// X and the noise draw come from independent streams of `seed`, so two
// datasets that differ only in noise level share X and the noise pattern.
Dataset make_dataset(const GroundTruth& gt, Eigen::Index n, const NoiseSpec& noise,
                     std::uint64_t seed);

}  // namespace seqrank
