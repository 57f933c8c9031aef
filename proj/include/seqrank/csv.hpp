#pragma once

#include <optional>
#include <string>
#include <vector>

namespace seqrank {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kNotReached = "not_reached";

// %.17g; NaN and infinities print as "nan" / "inf" / "-inf".
std::string format_double(double v);
std::string format_list(const std::vector<double>& v);  // ';'-separated
std::string format_list(const std::vector<std::size_t>& v);

// Mean and sample standard deviation (n - 1 denominator; 0 for a single value).
struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};
MeanStd mean_std(const std::vector<double>& v);

// Every table starts with schema_version and config_hash; cells are raw
// strings and fields containing ',' or '"' are quoted.
class CsvTable {
 public:
  CsvTable(std::string config_hash, std::vector<std::string> columns);

  // Values for columns after the two fixed ones, in order.
  void add_row(std::vector<std::string> cells);

  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t rows() const { return rows_.size(); }
  std::string str() const;
  void write(const std::string& path) const;

 private:
  std::string hash_;
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace seqrank
