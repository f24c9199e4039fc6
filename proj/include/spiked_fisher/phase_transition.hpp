#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <string_view>

#include "spiked_fisher/bulk.hpp"
#include "spiked_fisher/error.hpp"

namespace spiked_fisher {

enum class SpikeClass { Distant, AbsorbedUpper, AbsorbedLower };

constexpr std::string_view to_string(SpikeClass c) {
  switch (c) {
    case SpikeClass::Distant: return "distant";
    case SpikeClass::AbsorbedUpper: return "absorbed-upper";
    case SpikeClass::AbsorbedLower: return "absorbed-lower";
  }
  return "unknown";
}

struct PhaseResult {
  double alpha = 0.0;
  double psi = 0.0;
  double psi_prime = 0.0;
  SpikeClass classification = SpikeClass::Distant;
  double rho = 0.0;
  double critical_point = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

struct PsiParts {
  double numerator;
  double denominator;
};

inline PsiParts psi_parts(double alpha, double c1, double c2, const BulkMeasure& H) {
  if (H.kind() == BulkMeasure::Kind::PointMass) {
    const double t = H.atoms().front();
    return {1.0 - c1 * t / (t - alpha), 1.0 + c2 * alpha / (t - alpha)};
  }
  double i1 = 0.0;
  double i2 = 0.0;
  for (double t : H.atoms()) {
    i1 += t / (t - alpha);
    i2 += alpha / (t - alpha);
  }
  const double n = static_cast<double>(H.atoms().size());
  return {1.0 - c1 * i1 / n, 1.0 + c2 * i2 / n};
}

inline double psi_unchecked(double alpha, double c1, double c2, const BulkMeasure& H) {
  const PsiParts parts = psi_parts(alpha, c1, c2, H);
  return alpha * parts.numerator / parts.denominator;
}

inline double central_difference(double alpha, double h, double c1, double c2,
                                 const BulkMeasure& H) {
  return (psi_unchecked(alpha + h, c1, c2, H) - psi_unchecked(alpha - h, c1, c2, H)) / (2.0 * h);
}

/// Distance from alpha to the closed support interval of H.
inline double support_gap(double alpha, const BulkMeasure& H) {
  if (alpha > H.support_max()) return alpha - H.support_max();
  if (alpha < H.support_min()) return H.support_min() - alpha;
  return 0.0;
}

}  // namespace detail

/// Limit of the sample eigenvalue generated by a population spike alpha:
/// alpha (1 - c1 int t/(t-alpha) dH) / (1 + c2 int alpha/(t-alpha) dH).
inline double psi(double alpha, double c1, double c2, const BulkMeasure& H) {
  if (H.in_support(alpha)) {
    fail(ErrorCode::Domain, "alpha = " + std::to_string(alpha) + " lies inside the bulk support");
  }
  const detail::PsiParts parts = detail::psi_parts(alpha, c1, c2, H);
  if (std::abs(parts.denominator) < 1e-14) {
    fail(ErrorCode::Pole, "psi denominator vanishes at alpha = " + std::to_string(alpha));
  }
  return alpha * parts.numerator / parts.denominator;
}

/// Finite-n version: same map evaluated with c_n1, c_n2 and H_n.
inline double psi_n(double alpha, double c_n1, double c_n2, const BulkMeasure& H_n) {
  return psi(alpha, c_n1, c_n2, H_n);
}

/// Central difference with a step that halves until two successive estimates
/// agree to 1e-6 relative; returns the Richardson combination of the pair.
inline double psi_prime(double alpha, double c1, double c2, const BulkMeasure& H) {
  psi(alpha, c1, c2, H);  // domain and pole checks
  const double gap = detail::support_gap(alpha, H);
  double h = std::min(1e-3 * std::max(std::abs(alpha), 1e-3), 0.25 * gap);
  if (!(h > 1e-12 * std::max(1.0, std::abs(alpha)))) {
    fail(ErrorCode::StepAdaptation, "alpha is within one step of the support boundary");
  }
  const double scale = std::max(std::abs(psi(alpha, c1, c2, H) / alpha), 1e-300);
  double coarse = detail::central_difference(alpha, h, c1, c2, H);
  for (int iter = 0; iter < 40; ++iter) {
    h *= 0.5;
    const double fine = detail::central_difference(alpha, h, c1, c2, H);
    if (std::isfinite(fine) &&
        std::abs(fine - coarse) <= 1e-6 * std::max(std::abs(fine), 1e-6 * scale)) {
      return (4.0 * fine - coarse) / 3.0;
    }
    coarse = fine;
  }
  fail(ErrorCode::StepAdaptation, "finite-difference derivative did not stabilise");
}

namespace detail {

/// Sign-only derivative for bracketing; never throws.
inline double psi_slope(double t, double c1, double c2, const BulkMeasure& H) {
  const double h = std::min(1e-7 * std::max(std::abs(t), 1e-3), 0.25 * support_gap(t, H));
  return central_difference(t, h, c1, c2, H);
}

/// Bisection on psi' between a point with slope <= 0 and one with slope > 0,
/// in either order, to 1e-10.
inline double bisect_critical(double nonpositive, double positive, double c1, double c2,
                              const BulkMeasure& H) {
  for (int iter = 0; iter < 200; ++iter) {
    if (std::abs(positive - nonpositive) <= 1e-10 * std::max(1.0, std::abs(positive))) break;
    const double mid = 0.5 * (nonpositive + positive);
    (psi_slope(mid, c1, c2, H) > 0.0 ? positive : nonpositive) = mid;
  }
  return 0.5 * (nonpositive + positive);
}

}  // namespace detail

/// Distant when psi'(alpha) > 0. Otherwise the limit is psi at the nearest
/// critical point on the far side of alpha from the bulk: above the bulk the
/// search runs upward from alpha (past the pole of psi when alpha lies below
/// it), below the bulk it runs down toward 0.
inline PhaseResult classify_spike(double alpha, double c1, double c2, const BulkMeasure& H) {
  PhaseResult out;
  out.alpha = alpha;
  out.psi = psi(alpha, c1, c2, H);
  out.psi_prime = psi_prime(alpha, c1, c2, H);
  if (out.psi_prime > 0.0) {
    out.classification = SpikeClass::Distant;
    out.rho = out.psi;
    return out;
  }
  const bool above = alpha > H.support_max();
  auto denominator = [&](double t) { return detail::psi_parts(t, c1, c2, H).denominator; };
  auto slope = [&](double t) { return detail::psi_slope(t, c1, c2, H); };

  double lo = alpha;
  if (above) {
    if (denominator(lo) <= 0.0) {
      // Step past the pole: the denominator increases to 1 - c2 > 0 as t grows.
      double hi = lo;
      for (int k = 0; denominator(hi) <= 0.0; ++k) {
        if (k > 200) fail(ErrorCode::ClassificationFailure, "no pole crossing found above alpha");
        hi = H.support_max() + 2.0 * (hi - H.support_max());
      }
      for (int iter = 0; iter < 200 && hi - lo > 1e-14 * hi; ++iter) {
        const double mid = 0.5 * (lo + hi);
        (denominator(mid) <= 0.0 ? lo : hi) = mid;
      }
      lo = hi * (1.0 + 1e-6);
    }
    double hi = lo;
    for (int k = 0; slope(hi) <= 0.0; ++k) {
      if (k > 400) fail(ErrorCode::ClassificationFailure, "psi' keeps its sign above alpha");
      lo = hi;
      hi = H.support_max() + 1.25 * (hi - H.support_max());
    }
    out.critical_point = detail::bisect_critical(lo, hi, c1, c2, H);
    out.classification = SpikeClass::AbsorbedUpper;
  } else {
    double t = alpha;
    double upper = alpha;
    for (int k = 0; slope(t) <= 0.0; ++k) {
      if (k > 400 || t < 1e-12 * alpha) {
        fail(ErrorCode::ClassificationFailure, "psi' keeps its sign between 0 and alpha");
      }
      upper = t;
      t *= 0.8;
    }
    out.critical_point = detail::bisect_critical(upper, t, c1, c2, H);
    out.classification = SpikeClass::AbsorbedLower;
  }
  out.rho = detail::psi_unchecked(out.critical_point, c1, c2, H);
  return out;
}

}  // namespace spiked_fisher
