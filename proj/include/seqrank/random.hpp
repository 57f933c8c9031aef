#pragma once

#include "seqrank/linalg.hpp"

#include <cstdint>
#include <random>

namespace seqrank {

using Rng = std::mt19937_64;

// Independent random streams of one trial. Each consumer draws from its own
// stream so that changing one (e.g. the noise model) never shifts the others.
enum class Stream : std::uint64_t {
  GroundTruth = 1,
  Design = 2,
  Noise = 3,
  GdInit = 4,
};

// SplitMix64 mix of (seed, stream): a seed for a child generator.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream);
std::uint64_t split_seed(std::uint64_t seed, Stream stream);

// Entries i.i.d. N(0, stddev^2), filled column by column.
DenseMatrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng, double stddev = 1.0);
Vector gaussian_vector(Eigen::Index size, Rng& rng, double stddev = 1.0);

}  // namespace seqrank
