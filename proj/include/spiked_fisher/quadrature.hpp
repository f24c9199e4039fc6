#pragma once

#include <cmath>
#include <numbers>
#include <vector>

namespace spiked_fisher {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1, 1]; nodes by Newton iteration on P_n.
inline QuadratureRule gauss_legendre(int n) {
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      // n == 1 leaves p0 = 1, p1 = x, which is the right pair for P_1.
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

/// Integrates f over [lo, hi] with an n-point Gauss-Legendre rule.
template <class F>
double integrate_gl(F&& f, double lo, double hi, const QuadratureRule& rule) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return sum * half;
}

/// Composite Gauss-Legendre over [lo, hi], doubling the panel count until two
/// successive estimates agree to `tol` (absolute, scaled by max(1, |I|)).
template <class F>
double integrate_adaptive(F&& f, double lo, double hi, double tol = 1e-12,
                          int max_panels = 1 << 14) {
  static const QuadratureRule rule = gauss_legendre(20);
  auto composite = [&](int panels) {
    const double width = (hi - lo) / panels;
    double sum = 0.0;
    for (int k = 0; k < panels; ++k) {
      sum += integrate_gl(f, lo + k * width, lo + (k + 1) * width, rule);
    }
    return sum;
  };
  double previous = composite(1);
  for (int panels = 2; panels <= max_panels; panels *= 2) {
    const double current = composite(panels);
    if (std::abs(current - previous) <= tol * std::max(1.0, std::abs(current))) {
      return current;
    }
    previous = current;
  }
  return previous;
}

}  // namespace spiked_fisher
