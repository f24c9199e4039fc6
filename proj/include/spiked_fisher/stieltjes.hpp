#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <utility>
#include <vector>

#include "spiked_fisher/error.hpp"
#include "spiked_fisher/quadrature.hpp"

namespace spiked_fisher {

/// Transforms of the non-spiked Fisher LSD at a point lambda outside its
/// support, with m(l) = int 1/(x - l) dF.
///   m2 = int 1/(l - x)^2 dF,  m3 = int x/(l - x)^2 dF,
///   m_under = -(1 - c1)/l + c1 m,  m2_under = (1 - c1)/l^2 + c1 m2.
/// Algebraically m3 = l m2 + m and m2 = dm/dl.
struct StieltjesMoments {
  double lambda = 0.0;
  double m = 0.0;
  double m_under = 0.0;
  double m2 = 0.0;
  double m2_under = 0.0;
  double m3 = 0.0;
};

inline StieltjesMoments complete_moments(double lambda, double c1, double m, double m2,
                                         double m3) {
  StieltjesMoments sm;
  sm.lambda = lambda;
  sm.m = m;
  sm.m2 = m2;
  sm.m3 = m3;
  sm.m_under = -(1.0 - c1) / lambda + c1 * m;
  sm.m2_under = (1.0 - c1) / (lambda * lambda) + c1 * m2;
  return sm;
}

struct LsdSupport {
  double a = 1.0;
  double b = 1.0;
  double h = 0.0;
};

/// Support edges of the Fisher LSD for H = delta_1.
inline LsdSupport fisher_lsd_support(double c1, double c2) {
  if (!(c1 >= 0.0)) fail(ErrorCode::Domain, "c1 must be nonnegative");
  if (!(c2 >= 0.0 && c2 < 1.0)) fail(ErrorCode::Domain, "c2 must lie in [0, 1)");
  const double h = std::sqrt(c1 + c2 - c1 * c2);
  const double s = (1.0 - c2) * (1.0 - c2);
  return {(1.0 - h) * (1.0 - h) / s, (1.0 + h) * (1.0 + h) / s, h};
}

/// Absolutely continuous part of the Fisher LSD density. The measure also
/// carries an atom 1 - 1/c1 at zero when c1 > 1.
inline double fisher_lsd_density(double x, double c1, double c2) {
  const LsdSupport s = fisher_lsd_support(c1, c2);
  if (x <= s.a || x >= s.b) return 0.0;
  return (1.0 - c2) * std::sqrt((s.b - x) * (x - s.a)) /
         (2.0 * std::numbers::pi * x * (c1 + c2 * x));
}

namespace detail {

struct RawMoments {
  double m = 0.0;
  double m2 = 0.0;
  double m3 = 0.0;
};

/// Integrates the three kernels over the continuous part with x = a + (b-a) sin^2 t,
/// which cancels the square-root edges. `panels` composite 20-point panels.
inline RawMoments lsd_moments_panels(double lambda, double c1, double c2, int panels) {
  static const QuadratureRule rule = gauss_legendre(20);
  const LsdSupport s = fisher_lsd_support(c1, c2);
  const double span = s.b - s.a;
  RawMoments out;
  const double width = 0.5 * std::numbers::pi / panels;
  for (int k = 0; k < panels; ++k) {
    const double mid = (k + 0.5) * width;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double t = mid + 0.5 * width * rule.nodes[i];
      const double sn = std::sin(t);
      const double cs = std::cos(t);
      const double x = s.a + span * sn * sn;
      // f(x) dx = (1-c2) span^2 sin^2 cos^2 / (pi x (c1 + c2 x)) dt
      const double w = rule.weights[i] * 0.5 * width * (1.0 - c2) * span * span * sn * sn *
                       cs * cs / (std::numbers::pi * x * (c1 + c2 * x));
      const double d = lambda - x;
      out.m += -w / d;
      out.m2 += w / (d * d);
      out.m3 += w * x / (d * d);
    }
  }
  if (c1 > 1.0) {
    const double atom = 1.0 - 1.0 / c1;
    out.m += -atom / lambda;
    out.m2 += atom / (lambda * lambda);
  }
  return out;
}

}  // namespace detail

/// Moments of the Fisher LSD (H = delta_{scale}) by quadrature; panel count
/// doubles until successive estimates agree to 1e-10 absolute.
inline StieltjesMoments stieltjes_moments_quadrature(double lambda, double c1, double c2,
                                                     double scale = 1.0) {
  if (!(scale > 0.0)) fail(ErrorCode::Domain, "bulk scale must be positive");
  // For H = delta_t0 the LSD is that of t0 times the unit-bulk law.
  const double mu = lambda / scale;
  const LsdSupport s = fisher_lsd_support(c1, c2);
  if (mu >= s.a && mu <= s.b) {
    fail(ErrorCode::Domain, "lambda lies inside the LSD support");
  }
  if (c1 > 1.0 && mu == 0.0) fail(ErrorCode::Domain, "lambda sits on the atom at zero");
  detail::RawMoments prev;
  detail::RawMoments cur;
  if (s.a == s.b) {
    // c1 = c2 = 0: the LSD is the point mass at one.
    cur = {1.0 / (1.0 - mu), 1.0 / ((mu - 1.0) * (mu - 1.0)), 1.0 / ((mu - 1.0) * (mu - 1.0))};
  } else {
    prev = detail::lsd_moments_panels(mu, c1, c2, 2);
    bool converged = false;
    for (int panels = 4; panels <= (1 << 16); panels *= 2) {
      cur = detail::lsd_moments_panels(mu, c1, c2, panels);
      const double diff = std::max({std::abs(cur.m - prev.m), std::abs(cur.m2 - prev.m2),
                                    std::abs(cur.m3 - prev.m3)});
      if (diff <= 1e-10) {
        converged = true;
        break;
      }
      prev = cur;
    }
    if (!converged) fail(ErrorCode::Domain, "quadrature did not converge; lambda too close to edge");
  }
  return complete_moments(lambda, c1, cur.m / scale, cur.m2 / (scale * scale), cur.m3 / scale);
}

/// Finite sums over a chosen index set of a spectrum, divided by `normalizer`.
inline StieltjesMoments empirical_moments(double lambda, const std::vector<double>& eigs,
                                          double c1, const std::vector<std::size_t>& indices,
                                          double normalizer) {
  if (indices.empty()) fail(ErrorCode::InvalidArgument, "no eigenvalues to average");
  if (!(normalizer > 0.0)) fail(ErrorCode::InvalidArgument, "normalizer must be positive");
  double m = 0.0, m2 = 0.0, m3 = 0.0;
  for (std::size_t i : indices) {
    const double l = eigs.at(i);
    const double d = l - lambda;
    if (d == 0.0) fail(ErrorCode::DivisionByZero, "an eigenvalue equals the evaluation point");
    m += 1.0 / d;
    m2 += 1.0 / (d * d);
    m3 += l / (d * d);
  }
  return complete_moments(lambda, c1, m / normalizer, m2 / normalizer, m3 / normalizer);
}

/// Sample-spectrum moments over all indices not in `exclude`, normalized by
/// their count.
inline StieltjesMoments stieltjes_moments_empirical(double lambda, const std::vector<double>& eigs,
                                                    double c_n1,
                                                    const std::set<std::size_t>& exclude = {}) {
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < eigs.size(); ++i) {
    if (!exclude.contains(i)) keep.push_back(i);
  }
  if (keep.empty()) fail(ErrorCode::InvalidArgument, "every eigenvalue excluded");
  return empirical_moments(lambda, eigs, c_n1, keep, static_cast<double>(keep.size()));
}

/// Cdf of the Fisher LSD (atom at zero included).
inline double fisher_lsd_cdf(double x, double c1, double c2) {
  const LsdSupport s = fisher_lsd_support(c1, c2);
  const double atom = c1 > 1.0 ? 1.0 - 1.0 / c1 : 0.0;
  if (x < 0.0) return 0.0;
  if (x <= s.a) return atom;
  if (x >= s.b) return 1.0;
  // Same substitution, integrating over t in [0, t(x)].
  const double tx = std::asin(std::sqrt((x - s.a) / (s.b - s.a)));
  const double span = s.b - s.a;
  auto integrand = [&](double t) {
    const double sn = std::sin(t), cs = std::cos(t);
    const double y = s.a + span * sn * sn;
    return (1.0 - c2) * span * span * sn * sn * cs * cs / (std::numbers::pi * y * (c1 + c2 * y));
  };
  return std::min(1.0, atom + integrate_adaptive(integrand, 0.0, tx, 1e-13));
}

/// Quantiles of the Fisher LSD at levels (i - 0.5)/count, i = 1..count.
inline std::vector<double> fisher_lsd_quantiles(double c1, double c2, std::size_t count) {
  const LsdSupport s = fisher_lsd_support(c1, c2);
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(count);
    if (fisher_lsd_cdf(s.a, c1, c2) >= u) {
      out[i] = 0.0;
      continue;
    }
    double lo = s.a, hi = s.b;
    for (int iter = 0; iter < 100 && hi - lo > 1e-13 * s.b; ++iter) {
      const double mid = 0.5 * (lo + hi);
      (fisher_lsd_cdf(mid, c1, c2) < u ? lo : hi) = mid;
    }
    out[i] = 0.5 * (lo + hi);
  }
  return out;
}

}  // namespace spiked_fisher
