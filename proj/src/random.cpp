#include "seqrank/random.hpp"

namespace seqrank {

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t split_seed(std::uint64_t seed, Stream stream) {
  return split_seed(seed, static_cast<std::uint64_t>(stream));
}

DenseMatrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng, double stddev) {
  std::normal_distribution<double> dist(0.0, stddev);
  DenseMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = dist(rng);
  }
  return m;
}

Vector gaussian_vector(Eigen::Index size, Rng& rng, double stddev) {
  std::normal_distribution<double> dist(0.0, stddev);
  Vector v(size);
  for (Eigen::Index i = 0; i < size; ++i) v(i) = dist(rng);
  return v;
}

}  // namespace seqrank
