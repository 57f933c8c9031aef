#pragma once
//
// Matrix files. The binary container is
//   8 bytes magic "SQRKMAT1" | rows u64 LE | cols u64 LE | rows*cols f64 LE, row-major
// The text form is a "rows cols" header line followed by one line per row.
//

#include "seqrank/linalg.hpp"

#include <string>

namespace seqrank {

inline constexpr char kMatrixMagic[8] = {'S', 'Q', 'R', 'K', 'M', 'A', 'T', '1'};

void write_matrix(const std::string& path, const DenseMatrix& m);
DenseMatrix read_matrix(const std::string& path);

void write_matrix_text(const std::string& path, const DenseMatrix& m);

}  // namespace seqrank
