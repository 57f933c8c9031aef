#include "seqrank/matrix_io.hpp"

#include "seqrank/errors.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace seqrank {

namespace {

static_assert(std::endian::native == std::endian::little, "matrix container assumes a little-endian host");

void put_u64(std::ofstream& out, std::uint64_t v) { out.write(reinterpret_cast<const char*>(&v), 8); }

std::uint64_t get_u64(std::ifstream& in, const std::string& path) {
  std::uint64_t v = 0;
  if (!in.read(reinterpret_cast<char*>(&v), 8)) throw ConfigError("truncated matrix header in " + path);
  return v;
}

}  // namespace

void write_matrix(const std::string& path, const DenseMatrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open " + path + " for writing");
  out.write(kMatrixMagic, sizeof kMatrixMagic);
  put_u64(out, static_cast<std::uint64_t>(m.rows()));
  put_u64(out, static_cast<std::uint64_t>(m.cols()));
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = m;
  out.write(reinterpret_cast<const char*>(rm.data()),
            static_cast<std::streamsize>(rm.size() * sizeof(double)));
  if (!out) throw ConfigError("write failed for " + path);
}

DenseMatrix read_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open matrix file " + path);
  char magic[sizeof kMatrixMagic];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMatrixMagic, sizeof magic) != 0) {
    throw ConfigError(path + " is not a matrix container (bad magic)");
  }
  const std::uint64_t rows = get_u64(in, path);
  const std::uint64_t cols = get_u64(in, path);
  if (rows > (1ull << 32) || cols > (1ull << 32)) throw ConfigError("implausible dimensions in " + path);
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm(rows, cols);
  if (!in.read(reinterpret_cast<char*>(rm.data()),
               static_cast<std::streamsize>(rm.size() * sizeof(double)))) {
    throw ConfigError("truncated matrix payload in " + path);
  }
  return rm;
}

void write_matrix_text(const std::string& path, const DenseMatrix& m) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw ConfigError("cannot open " + path + " for writing");
  std::fprintf(f, "%lld %lld\n", static_cast<long long>(m.rows()), static_cast<long long>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::fprintf(f, j ? " %.17g" : "%.17g", m(i, j));
    }
    std::fputc('\n', f);
  }
  std::fclose(f);
}

}  // namespace seqrank
