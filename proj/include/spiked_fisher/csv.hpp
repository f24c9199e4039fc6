#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spiked_fisher/error.hpp"
#include "spiked_fisher/stats.hpp"

namespace spiked_fisher {

/// printf-style %.*g; locale independent and identical across runs.
inline std::string format_number(double v, int digits = 10) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

/// Numeric table from a text file: one row per line, fields separated by
/// commas and/or whitespace. Lines starting with '#' and non-numeric header
/// lines are skipped.
inline Eigen::MatrixXd read_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    for (char& ch : line) {
      if (ch == ',' || ch == ';' || ch == '\t') ch = ' ';
    }
    std::istringstream fields(line);
    std::vector<double> row;
    std::string tok;
    bool numeric = true;
    while (fields >> tok) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(tok, &used));
        if (used != tok.size()) numeric = false;
      } catch (const std::exception&) {
        numeric = false;
      }
    }
    if (!numeric) {
      if (rows.empty()) continue;  // header
      fail(ErrorCode::Io, "non-numeric field in " + path.string());
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(ErrorCode::Io, path.string() + " holds no numbers");
  const auto cols = rows.front().size();
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) fail(ErrorCode::Io, "ragged rows in " + path.string());
    for (std::size_t j = 0; j < cols; ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return out;
}

/// All numbers of a file flattened in row order.
inline std::vector<double> read_values(const std::filesystem::path& path) {
  const Eigen::MatrixXd m = read_matrix(path);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back(m(i, j));
  }
  return out;
}

class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path) : out_(path, std::ios::binary) {
    if (!out_) fail(ErrorCode::Io, "cannot write " + path.string());
  }

  template <class... Fields>
  void row(const Fields&... fields) {
    bool first = true;
    ((out_ << (first ? "" : ",") << text(fields), first = false), ...);
    out_ << '\n';
  }

  void row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) out_ << (i ? "," : "") << fields[i];
    out_ << '\n';
  }

 private:
  static std::string text(const std::string& s) { return s; }
  static std::string text(const char* s) { return s; }
  static std::string text(double v) { return format_number(v); }
  static std::string text(int v) { return std::to_string(v); }
  static std::string text(long v) { return std::to_string(v); }
  static std::string text(long long v) { return std::to_string(v); }
  static std::string text(std::size_t v) { return std::to_string(v); }

  std::ofstream out_;
};

inline void write_histogram(const std::filesystem::path& path, const std::vector<double>& samples) {
  CsvWriter csv(path);
  csv.row("bin_lo", "bin_hi", "count", "density");
  for (const HistogramBin& b : histogram(samples)) csv.row(b.lo, b.hi, b.count, b.density);
}

}  // namespace spiked_fisher
