#include "seqrank/csv.hpp"

#include "seqrank/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

namespace seqrank {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ';';
    out += format_double(v[i]);
  }
  return out;
}

std::string format_list(const std::vector<std::size_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(v[i]);
  }
  return out;
}

MeanStd mean_std(const std::vector<double>& v) {
  MeanStd out;
  if (v.empty()) return {std::nan(""), std::nan("")};
  out.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - out.mean) * (x - out.mean);
    out.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return out;
}

CsvTable::CsvTable(std::string config_hash, std::vector<std::string> columns)
    : hash_(std::move(config_hash)), columns_{"schema_version", "config_hash"} {
  columns_.insert(columns_.end(), columns.begin(), columns.end());
}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() + 2 != columns_.size()) {
    throw DimensionError("csv row has " + std::to_string(cells.size() + 2) + " cells, header has " +
                         std::to_string(columns_.size()));
  }
  cells.insert(cells.begin(), {std::to_string(kSchemaVersion), hash_});
  rows_.push_back(std::move(cells));
}

namespace {

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void append_line(std::string& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += quote(cells[i]);
  }
  out += '\n';
}

}  // namespace

std::string CsvTable::str() const {
  std::string out;
  append_line(out, columns_);
  for (const auto& r : rows_) append_line(out, r);
  return out;
}

void CsvTable::write(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open " + path + " for writing");
  f << str();
  if (!f) throw ConfigError("write failed for " + path);
}

}  // namespace seqrank
