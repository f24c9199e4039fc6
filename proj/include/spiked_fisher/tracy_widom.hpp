#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

#include "spiked_fisher/detail/tw1_table.hpp"
#include "spiked_fisher/error.hpp"

namespace spiked_fisher {

namespace detail {

inline constexpr std::size_t kTw1Size = kTw1Cdf.size();

inline double tw1_x(std::size_t i) { return kTw1GridStart + kTw1GridStep * static_cast<double>(i); }

/// Fritsch-Carlson (PCHIP) slopes of the tabulated cdf.
inline const std::array<double, kTw1Size>& tw1_slopes() {
  static const std::array<double, kTw1Size> slopes = [] {
    std::array<double, kTw1Size> d{};
    std::array<double, kTw1Size - 1> delta{};
    for (std::size_t i = 0; i + 1 < kTw1Size; ++i) {
      delta[i] = (kTw1Cdf[i + 1] - kTw1Cdf[i]) / kTw1GridStep;
    }
    for (std::size_t i = 1; i + 1 < kTw1Size; ++i) {
      const double a = delta[i - 1], b = delta[i];
      d[i] = (a > 0.0 && b > 0.0) ? 2.0 * a * b / (a + b) : 0.0;  // equal spacing
    }
    d[0] = delta[0];
    d[kTw1Size - 1] = delta[kTw1Size - 2];
    return d;
  }();
  return slopes;
}

/// Cubic Hermite value on segment i at local coordinate s in [0, 1].
inline double tw1_segment(std::size_t i, double s) {
  const auto& d = tw1_slopes();
  const double h = kTw1GridStep;
  const double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * kTw1Cdf[i] + (s3 - 2 * s2 + s) * h * d[i] +
         (-2 * s3 + 3 * s2) * kTw1Cdf[i + 1] + (s3 - s2) * h * d[i + 1];
}

}  // namespace detail

/// Beta = 1 Tracy-Widom cdf by monotone cubic interpolation of the table;
/// clamped to the end values outside the grid.
inline double tw1_cdf(double x) {
  using namespace detail;
  const double last = tw1_x(kTw1Size - 1);
  if (x <= kTw1GridStart) return kTw1Cdf.front();
  if (x >= last) return kTw1Cdf.back();
  const double pos = (x - kTw1GridStart) / kTw1GridStep;
  const auto i = std::min(static_cast<std::size_t>(pos), kTw1Size - 2);
  return tw1_segment(i, pos - static_cast<double>(i));
}

/// Inverse of tw1_cdf; the interpolant is monotone so bisection on the
/// bracketing segment is exact to round-off.
inline double tw1_quantile(double prob) {
  using namespace detail;
  if (!(prob > 0.0 && prob < 1.0)) fail(ErrorCode::InvalidArgument, "probability must lie in (0, 1)");
  if (prob < kTw1Cdf.front() || prob > kTw1Cdf.back()) {
    fail(ErrorCode::Range, "probability outside the tabulated Tracy-Widom range");
  }
  const auto it = std::lower_bound(kTw1Cdf.begin(), kTw1Cdf.end(), prob);
  std::size_t i = static_cast<std::size_t>(it - kTw1Cdf.begin());
  if (i == 0) return kTw1GridStart;
  i -= 1;
  double lo = 0.0, hi = 1.0;
  for (int iter = 0; iter < 80; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (tw1_segment(i, mid) < prob ? lo : hi) = mid;
  }
  return tw1_x(i) + 0.5 * (lo + hi) * kTw1GridStep;
}

}  // namespace spiked_fisher
