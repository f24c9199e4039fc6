#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "spiked_fisher/error.hpp"
#include "spiked_fisher/quadrature.hpp"
#include "spiked_fisher/random.hpp"

namespace spiked_fisher {

enum class Law { StandardGaussian, Rademacher, ScaledT4 };

/// Entry law of the data arrays. `q_flag` is 1 for real data and 0 for the
/// complex case; only variance formulas read it, sampling is always real.
struct PopulationKind {
  Law law = Law::StandardGaussian;
  int q_flag = 1;
};

constexpr std::string_view law_name(Law law) {
  switch (law) {
    case Law::StandardGaussian: return "gaussian";
    case Law::Rademacher: return "rademacher";
    case Law::ScaledT4: return "t4scaled";
  }
  return "unknown";
}

inline Law parse_law(std::string_view name) {
  if (name == "gaussian") return Law::StandardGaussian;
  if (name == "rademacher" || name == "binary") return Law::Rademacher;
  if (name == "t4scaled" || name == "t4") return Law::ScaledT4;
  fail(ErrorCode::Config, "unknown population '" + std::string(name) + "'");
}

/// Standard normal draws by the Marsaglia polar method. Written out rather than
/// using std::normal_distribution so that streams are identical across
/// standard libraries.
class NormalSampler {
 public:
  double operator()(Xoshiro256pp& rng) {
    if (cached_) {
      const double v = *cached_;
      cached_.reset();
      return v;
    }
    double u, v, s;
    do {
      u = 2.0 * rng.uniform01() - 1.0;
      v = 2.0 * rng.uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(s) / s);
    cached_ = v * scale;
    return u * scale;
  }

 private:
  std::optional<double> cached_;
};

/// One draw from the named unit-variance law.
class PopulationSampler {
 public:
  explicit PopulationSampler(Law law) : law_(law) {}

  double operator()(Xoshiro256pp& rng) {
    switch (law_) {
      case Law::StandardGaussian:
        return normal_(rng);
      case Law::Rademacher:
        return (rng() >> 63) ? 1.0 : -1.0;
      case Law::ScaledT4: {
        // t(4) = Z / sqrt(chi2_4 / 4) with chi2_4 = -2 log(U1 U2); scaled by 2^{-1/2}.
        const double z = normal_(rng);
        double u1, u2;
        do {
          u1 = rng.uniform01();
          u2 = rng.uniform01();
        } while (u1 == 0.0 || u2 == 0.0);
        const double chi2 = -2.0 * std::log(u1 * u2);
        return z / std::sqrt(chi2 / 4.0) * std::numbers::sqrt2 / 2.0;
      }
    }
    return 0.0;
  }

 private:
  Law law_;
  NormalSampler normal_;
};

/// rows x cols matrix of i.i.d. draws; column-major fill from a single stream.
inline Eigen::MatrixXd sample_matrix(PopulationKind kind, Eigen::Index rows,
                                     Eigen::Index cols, std::uint64_t seed) {
  if (rows <= 0 || cols <= 0) {
    fail(ErrorCode::InvalidDimension, "sample_matrix needs rows, cols >= 1");
  }
  Xoshiro256pp rng(seed);
  PopulationSampler draw(kind.law);
  Eigen::MatrixXd out(rows, cols);
  double* data = out.data();
  for (Eigen::Index i = 0; i < rows * cols; ++i) data[i] = draw(rng);
  return out;
}

struct TruncationConfig {
  double eta = 2.0;
  Eigen::Index n = 1;

  double threshold() const { return eta * std::sqrt(static_cast<double>(n)); }
};

/// Zeroes entries with |x| >= eta*sqrt(n), then recentres and rescales the
/// whole array to empirical mean 0 and variance 1.
inline Eigen::MatrixXd truncate_center_rescale(const Eigen::MatrixXd& data,
                                               const TruncationConfig& cfg) {
  if (cfg.n != data.cols()) {
    fail(ErrorCode::InvalidArgument, "truncation n must equal the number of columns");
  }
  if (!(cfg.eta > 0.0)) fail(ErrorCode::InvalidArgument, "eta must be positive");
  const double thr = cfg.threshold();
  Eigen::MatrixXd out = data.unaryExpr([thr](double x) { return std::abs(x) < thr ? x : 0.0; });
  const double mean = out.mean();
  out.array() -= mean;
  const double var = out.squaredNorm() / static_cast<double>(out.size());
  if (!(var > 0.0)) {
    fail(ErrorCode::DegenerateTruncation, "every entry truncated; variance is zero");
  }
  out /= std::sqrt(var);
  return out;
}

struct FourthMoment {
  double mu = 0.0;    // E|x|^4 1{|x| < eta sqrt(n)}
  double beta = 0.0;  // mu - 2 - q
};

namespace detail {

inline double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// Density of 2^{-1/2} t(4).
inline double scaled_t4_pdf(double z) {
  return std::numbers::sqrt2 * 0.375 * std::pow(1.0 + 0.5 * z * z, -2.5);
}

}  // namespace detail

inline FourthMoment fourth_moment_params(PopulationKind kind, const TruncationConfig& cfg) {
  const double thr = cfg.threshold();
  double mu = 0.0;
  switch (kind.law) {
    case Law::Rademacher:
      mu = thr > 1.0 ? 1.0 : 0.0;
      break;
    case Law::StandardGaussian:
      // int_{-T}^{T} x^4 phi(x) dx in closed form.
      mu = 3.0 * (2.0 * detail::normal_cdf(thr) - 1.0) -
           2.0 * detail::normal_pdf(thr) * (thr * thr * thr + 3.0 * thr);
      break;
    case Law::ScaledT4: {
      // Split at 1 so the polynomial-decay tail gets its own panels.
      auto integrand = [](double z) { return z * z * z * z * detail::scaled_t4_pdf(z); };
      const double knee = std::min(1.0, thr);
      mu = 2.0 * integrate_adaptive(integrand, 0.0, knee, 1e-14);
      if (thr > knee) mu += 2.0 * integrate_adaptive(integrand, knee, thr, 1e-14);
      break;
    }
  }
  return {mu, mu - 2.0 - kind.q_flag};
}

}  // namespace spiked_fisher
