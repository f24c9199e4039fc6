#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "spiked_fisher/config.hpp"
#include "spiked_fisher/csv.hpp"
#include "spiked_fisher/montecarlo.hpp"
#include "spiked_fisher/stats.hpp"

namespace spiked_fisher {

inline const std::array<const char*, 9>& percentile_headers() {
  static const std::array<const char*, 9> h = {"p01", "p05", "p10", "p25", "p50",
                                               "p75", "p90", "p95", "p99"};
  return h;
}

inline void write_percentiles(const std::filesystem::path& path, const std::vector<ReportRow>& rows) {
  CsvWriter csv(path);
  std::vector<std::string> header = {"statistic", "case", "method"};
  for (const char* h : percentile_headers()) header.emplace_back(h);
  header.emplace_back("ks");
  csv.row(header);
  for (const ReportRow& r : rows) {
    std::vector<std::string> fields = {r.statistic, r.case_label, r.method};
    for (double v : r.row.values) fields.push_back(format_number(v, 6));
    fields.push_back(format_number(r.row.ks, 6));
    csv.row(fields);
  }
}

/// Standardized statistics in full precision, one column per statistic.
inline void write_samples(const std::filesystem::path& path, const std::vector<StatisticSeries>& series) {
  CsvWriter csv(path);
  std::vector<std::string> header = {"index"};
  std::size_t rows = 0;
  for (const auto& s : series) {
    header.push_back(s.name);
    rows = std::max(rows, s.values.size());
  }
  csv.row(header);
  for (std::size_t i = 0; i < rows; ++i) {
    std::vector<std::string> fields = {std::to_string(i)};
    for (const auto& s : series) fields.push_back(i < s.values.size() ? format_number(s.values[i], 17) : "");
    csv.row(fields);
  }
}

inline void write_sizepower(const std::filesystem::path& path,
                            const std::vector<SizePowerResult>& results) {
  CsvWriter csv(path);
  csv.row("c1", "c2", "p", "q1_ratio", "size", "power");
  for (const auto& r : results) {
    const RoyGeometry& g = r.geometry;
    csv.row(format_number(g.c1_tilde, 6), format_number(g.c2_tilde, 6), static_cast<long long>(g.p),
            format_number(g.q1_ratio, 6), format_number(r.size, 6), format_number(r.power, 6));
  }
}

/// Result of one Monte Carlo run together with everything it wrote.
struct RunOutcome {
  McReport report;
  std::vector<StatisticSeries> series;
};

inline RunOutcome simulate(const RunConfig& cfg, const OutputPaths& outputs = {}) {
  const PreparedRun run(cfg);
  const auto records = run_replications(run);
  RunOutcome out;
  out.series = standardized_statistics(run, records);
  out.report = summarize(run, records, out.series);
  if (!outputs.dir.empty()) {
    std::filesystem::create_directories(outputs.dir);
    write_percentiles(outputs.dir / "percentiles.csv", out.report.rows);
    if (outputs.samples) write_samples(outputs.dir / "samples.csv", out.series);
    if (outputs.histograms) {
      for (const auto& s : out.series) write_histogram(outputs.dir / ("histogram_" + s.name + ".csv"), s.values);
    }
  }
  return out;
}

/// Row filter for `reproduce table2`: "all", or comma-separated key=value
/// pairs over p, c1, c2 and ratio, e.g. "p=50,c1=2".
inline bool geometry_matches(const RoyGeometry& g, const std::string& filter) {
  if (filter.empty() || filter == "all") return true;
  std::size_t pos = 0;
  while (pos <= filter.size()) {
    const std::size_t end = std::min(filter.find(',', pos), filter.size());
    const std::string item = filter.substr(pos, end - pos);
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos) fail(ErrorCode::Config, "bad row filter '" + item + "'");
    const std::string key = item.substr(0, eq);
    double value = 0.0;
    try {
      value = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      fail(ErrorCode::Config, "bad row filter value '" + item + "'");
    }
    double actual = 0.0;
    if (key == "p") actual = static_cast<double>(g.p);
    else if (key == "c1") actual = g.c1_tilde;
    else if (key == "c2") actual = g.c2_tilde;
    else if (key == "ratio" || key == "q1_ratio") actual = g.q1_ratio;
    else fail(ErrorCode::Config, "unknown row filter key '" + key + "'");
    if (std::abs(actual - value) > 1e-9) return false;
    pos = end + 1;
  }
  return true;
}

inline std::vector<SizePowerResult> reproduce_size_power(const std::string& filter, int replications,
                                                         std::uint64_t seed, int threads) {
  std::vector<SizePowerResult> out;
  for (const RoyGeometry& g : table2_geometries()) {
    if (!geometry_matches(g, filter)) continue;
    SizePowerConfig cfg;
    cfg.geometry = g;
    cfg.replications = replications;
    cfg.seed = geometry_seed(seed, g);
    cfg.threads = threads;
    out.push_back(size_power_run(cfg));
  }
  if (out.empty()) fail(ErrorCode::Config, "row filter '" + filter + "' selects nothing");
  return out;
}

}  // namespace spiked_fisher
