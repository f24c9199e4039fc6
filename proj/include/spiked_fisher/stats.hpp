#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "spiked_fisher/error.hpp"

namespace spiked_fisher {

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// Acklam's rational approximation polished by one Halley step.
inline double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) fail(ErrorCode::InvalidArgument, "probability must lie in (0, 1)");
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double low = 0.02425;
  double x;
  if (p < low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double e = normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

/// One-sample Kolmogorov-Smirnov sup distance.
template <class Cdf>
double ks_statistic(std::span<const double> samples, Cdf&& cdf) {
  if (samples.empty()) fail(ErrorCode::SampleSize, "KS needs at least one sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, std::abs((i + 1) / n - f), std::abs(i / n - f)});
  }
  return d;
}

/// Kolmogorov limiting tail Q(x) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 x^2).
inline double kolmogorov_tail(double x) {
  if (x < 0.2) return 1.0;
  double sum = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * x * x);
    sum += (j % 2 == 1 ? term : -term);
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

struct TwoSampleKs {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Two-sample KS with the asymptotic p-value and the small-sample correction
/// (sqrt(ne) + 0.12 + 0.11/sqrt(ne)) D.
inline TwoSampleKs ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) fail(ErrorCode::SampleSize, "two-sample KS needs both samples");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size()), ny = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] <= v) ++i;
    while (j < y.size() && y[j] <= v) ++j;
    d = std::max(d, std::abs(i / nx - j / ny));
  }
  const double en = std::sqrt(nx * ny / (nx + ny));
  return {d, kolmogorov_tail((en + 0.12 + 0.11 / en) * d)};
}

/// Linear interpolation between order statistics at (n - 1) p.
inline double quantile_sorted(std::span<const double> sorted, double prob) {
  if (sorted.empty()) fail(ErrorCode::SampleSize, "quantile of an empty sample");
  const double pos = prob * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

inline constexpr std::array<double, 9> kTableLevels = {0.01, 0.05, 0.10, 0.25, 0.50,
                                                       0.75, 0.90, 0.95, 0.99};

struct PercentileRow {
  std::array<double, 9> values{};
  double ks = 0.0;
  std::size_t n_effective = 0;
};

template <class Cdf>
PercentileRow percentile_table(std::span<const double> samples, Cdf&& reference_cdf) {
  if (samples.size() < 100) fail(ErrorCode::SampleSize, "percentile table needs >= 100 samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  PercentileRow row;
  for (std::size_t k = 0; k < kTableLevels.size(); ++k) {
    row.values[k] = quantile_sorted(sorted, kTableLevels[k]);
  }
  row.ks = ks_statistic(sorted, reference_cdf);
  row.n_effective = sorted.size();
  return row;
}

/// Empirical cdf of a fixed reference sample (kept sorted).
class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::vector<double> values) : sorted_(std::move(values)) {
    if (sorted_.empty()) fail(ErrorCode::SampleSize, "empty reference sample");
    std::sort(sorted_.begin(), sorted_.end());
  }
  double operator()(double x) const {
    const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
    return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
  }
  const std::vector<double>& sorted() const { return sorted_; }

 private:
  std::vector<double> sorted_;
};

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
  double density = 0.0;
};

/// Freedman-Diaconis binning: width 2 IQR n^{-1/3}.
inline std::vector<HistogramBin> histogram(std::span<const double> samples) {
  if (samples.size() < 2) fail(ErrorCode::SampleSize, "histogram needs at least two samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
  const double range = sorted.back() - sorted.front();
  double width = 2.0 * iqr / std::cbrt(n);
  if (!(width > 0.0)) width = range > 0.0 ? range : 1.0;
  const auto bins = static_cast<std::size_t>(std::max(1.0, std::ceil(range / width)));
  std::vector<HistogramBin> out(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    out[k].lo = sorted.front() + static_cast<double>(k) * width;
    out[k].hi = out[k].lo + width;
  }
  for (double v : sorted) {
    auto k = static_cast<std::size_t>((v - sorted.front()) / width);
    out[std::min(k, bins - 1)].count += 1;
  }
  for (auto& bin : out) bin.density = static_cast<double>(bin.count) / (n * width);
  return out;
}

}  // namespace spiked_fisher
