#include "seqrank/datagen.hpp"

#include "seqrank/errors.hpp"
#include "seqrank/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace seqrank {

void NoiseSpec::validate() const {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw ConfigError("noise kappa must be >= 0");
  if (kind == NoiseKind::Noiseless && kappa != 0.0) {
    throw ConfigError("noiseless spec must have kappa = 0");
  }
  if (!(sparsity >= 0.0 && sparsity <= 1.0)) throw ConfigError("noise sparsity must be in [0, 1]");
}

std::string to_string(Profile p) {
  switch (p) {
    case Profile::Uniform: return "Uniform";
    case Profile::ExponentialDecay: return "ExponentialDecay";
    case Profile::PowerLaw: return "PowerLaw";
  }
  return "?";
}

std::string to_string(NoiseKind k) {
  switch (k) {
    case NoiseKind::Noiseless: return "Noiseless";
    case NoiseKind::Gaussian: return "Gaussian";
    case NoiseKind::Sparse: return "Sparse";
  }
  return "?";
}

Profile parse_profile(std::string_view name) {
  if (name == "Uniform") return Profile::Uniform;
  if (name == "ExponentialDecay") return Profile::ExponentialDecay;
  if (name == "PowerLaw") return Profile::PowerLaw;
  throw ConfigError("unknown profile '" + std::string(name) + "'");
}

NoiseKind parse_noise_kind(std::string_view name) {
  if (name == "Noiseless") return NoiseKind::Noiseless;
  if (name == "Gaussian") return NoiseKind::Gaussian;
  if (name == "Sparse") return NoiseKind::Sparse;
  throw ConfigError("unknown noise kind '" + std::string(name) + "'");
}

std::vector<double> planted_sigmas(Profile profile, std::size_t r_star) {
  if (r_star == 0) throw DimensionError("planted_sigmas: r_star must be >= 1");
  std::vector<double> s(r_star);
  for (std::size_t i = 1; i <= r_star; ++i) {
    switch (profile) {
      case Profile::Uniform:
        s[i - 1] = 10.0;
        break;
      case Profile::ExponentialDecay:
        s[i - 1] = r_star == 1
                       ? 100.0
                       : 100.0 * std::pow(0.01, static_cast<double>(i - 1) /
                                                    static_cast<double>(r_star - 1));
        break;
      case Profile::PowerLaw:
        s[i - 1] = 100.0 / static_cast<double>(i * i);
        break;
    }
  }
  return s;
}

std::vector<double> normalize_frobenius(const std::vector<double>& sigmas, double target_fro) {
  if (!(target_fro > 0.0)) throw DimensionError("normalize_frobenius: target must be positive");
  const double norm = std::sqrt(
      std::inner_product(sigmas.begin(), sigmas.end(), sigmas.begin(), 0.0));
  if (!(norm > 0.0)) throw DimensionError("normalize_frobenius: all-zero spectrum");
  std::vector<double> out(sigmas);
  for (double& s : out) s *= target_fro / norm;
  return out;
}

namespace {

DenseMatrix random_orthonormal(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Eigen::HouseholderQR<DenseMatrix> qr(gaussian_matrix(rows, cols, rng));
  return qr.householderQ() * DenseMatrix::Identity(rows, cols);
}

}  // namespace

GroundTruth generate_w_star(Eigen::Index m, Eigen::Index d, Eigen::Index r_star, Profile profile,
                            double target_fro, std::uint64_t seed) {
  if (m < 1 || d < 1 || r_star < 1) throw DimensionError("generate_w_star: dimensions must be >= 1");
  if (r_star > std::min(m, d)) throw DimensionError("generate_w_star: r_star exceeds min(m, d)");
  GroundTruth gt;
  gt.profile = profile;
  gt.rank = r_star;
  gt.sigmas = normalize_frobenius(planted_sigmas(profile, static_cast<std::size_t>(r_star)),
                                  target_fro);
  Rng rng(seed);
  const DenseMatrix u = random_orthonormal(m, r_star, rng);
  const DenseMatrix v = random_orthonormal(d, r_star, rng);
  const Vector s = Eigen::Map<const Vector>(gt.sigmas.data(), r_star);
  gt.w_star = u * s.asDiagonal() * v.transpose();
  return gt;
}

DenseMatrix sample_gaussian(Eigen::Index d, Eigen::Index n, std::uint64_t seed) {
  if (d < 1 || n < 1) throw DimensionError("sample_x: dimensions must be >= 1");
  Rng rng(seed);
  return gaussian_matrix(d, n, rng);
}

DenseMatrix sample_x(Eigen::Index d, Eigen::Index n, std::uint64_t seed) {
  DenseMatrix x = sample_gaussian(d, n, seed);
  for (Eigen::Index i = 0; i < d; ++i) {
    const double norm = x.row(i).norm();
    if (!(norm > 0.0)) throw NumericalError("sample_x: zero row draw");
    x.row(i) /= norm;
  }
  return x;
}

Dataset make_dataset(const GroundTruth& gt, Eigen::Index n, const NoiseSpec& noise,
                     std::uint64_t seed) {
  noise.validate();
  Dataset ds;
  ds.noise = noise;
  ds.seed = seed;
  ds.x = sample_x(gt.w_star.cols(), n, split_seed(seed, Stream::Design));
  ds.y_star = gt.w_star * ds.x;
  ds.y = ds.y_star;

  const Eigen::Index m = ds.y.rows();
  Rng rng(split_seed(seed, Stream::Noise));
  switch (noise.kind) {
    case NoiseKind::Noiseless:
      break;
    case NoiseKind::Gaussian:
      ds.y += noise.kappa * gaussian_matrix(m, n, rng);
      ds.corrupted_entries = noise.kappa > 0.0 ? static_cast<std::size_t>(m * n) : 0;
      break;
    case NoiseKind::Sparse: {
      const auto total = static_cast<std::size_t>(m * n);
      const auto count =
          static_cast<std::size_t>(std::floor(noise.sparsity * static_cast<double>(total)));
      std::vector<std::size_t> all(total);
      std::iota(all.begin(), all.end(), std::size_t{0});
      std::vector<std::size_t> picked;
      picked.reserve(count);
      std::sample(all.begin(), all.end(), std::back_inserter(picked), count, rng);
      const Vector values = gaussian_vector(static_cast<Eigen::Index>(count), rng);
      for (std::size_t i = 0; i < count; ++i) {
        // Positions index the m x n grid column-major.
        ds.y(static_cast<Eigen::Index>(picked[i] % m), static_cast<Eigen::Index>(picked[i] / m)) +=
            noise.kappa * values(static_cast<Eigen::Index>(i));
      }
      ds.corrupted_entries = noise.kappa > 0.0 ? count : 0;
      break;
    }
  }
  return ds;
}

}  // namespace seqrank
