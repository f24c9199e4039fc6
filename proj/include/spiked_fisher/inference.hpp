#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "spiked_fisher/bulk.hpp"
#include "spiked_fisher/clt.hpp"
#include "spiked_fisher/error.hpp"
#include "spiked_fisher/fisher.hpp"
#include "spiked_fisher/phase_transition.hpp"
#include "spiked_fisher/stieltjes.hpp"

namespace spiked_fisher {

/// Which eigenvalues enter the moment sums evaluated at psi_hat.
enum class PsiPointSum {
  InsideJ1,   // (1/p) sum over i in J1
  OutsideJ1,  // (1/(p - |J1|)) sum over i not in J1
};

struct FourthMomentBetas {
  double beta_x = 0.0;
  double beta_y = 0.0;
};

struct InferenceOptions {
  double j1_threshold = 0.2;
  PsiPointSum psi_sum = PsiPointSum::InsideJ1;
  std::optional<FourthMomentBetas> betas;  // none: Gaussian-type variance
  BulkMeasure bulk;                        // H_n used for psi_hat
  int q_flag = 1;
};

struct SpikeEstimate {
  double alpha_hat = 0.0;
  double psi_hat = 0.0;
  std::vector<std::size_t> J1;
  StieltjesMoments moments_at_l1;
  StieltjesMoments moments_at_psi;
  double theta_hat = 0.0;
  double phi_hat = 0.0;
  double nu1_hat = 0.0;
  double nu2_hat = 0.0;
  double sigma_hat = 0.0;
  double lambda1_stat = 0.0;
};

/// Indices (0-based) with |l_i - l_1| / |l_1| <= threshold.
inline std::vector<std::size_t> select_j1(const std::vector<double>& eigs, double threshold = 0.2) {
  if (eigs.empty()) fail(ErrorCode::InvalidArgument, "empty spectrum");
  std::vector<std::size_t> j1;
  const double l1 = eigs.front();
  for (std::size_t i = 0; i < eigs.size(); ++i) {
    if (std::abs(eigs[i] - l1) <= threshold * std::abs(l1)) j1.push_back(i);
  }
  return j1;
}

inline std::vector<double> to_std_vector(const Eigen::VectorXd& v) {
  return {v.data(), v.data() + v.size()};
}

/// alpha_hat = -(1 + c2 l1 m(l1)) / m_under(l1) with the moments over the
/// eigenvalues outside J1.
inline SpikeEstimate estimate_alpha1(const FisherSpectrum& spectrum,
                                     const InferenceOptions& opts = {}) {
  const std::vector<double> eigs = to_std_vector(spectrum.eigs());
  SpikeEstimate est;
  est.J1 = select_j1(eigs, opts.j1_threshold);
  if (est.J1.size() == eigs.size()) fail(ErrorCode::NoBulk, "every eigenvalue falls in J1");
  std::vector<std::size_t> outside;
  std::size_t next = 0;
  for (std::size_t i = 0; i < eigs.size(); ++i) {
    if (next < est.J1.size() && est.J1[next] == i) {
      ++next;
      continue;
    }
    outside.push_back(i);
  }
  const double l1 = eigs.front();
  est.moments_at_l1 = empirical_moments(l1, eigs, spectrum.c_n1(), outside,
                                        static_cast<double>(outside.size()));
  if (est.moments_at_l1.m_under == 0.0) {
    fail(ErrorCode::DegenerateEstimate, "companion transform vanishes at l1");
  }
  est.alpha_hat =
      -(1.0 + spectrum.c_n2() * l1 * est.moments_at_l1.m) / est.moments_at_l1.m_under;
  return est;
}

/// psi_hat, the moment estimates at psi_hat and sigma_hat.
inline void complete_estimate(const FisherSpectrum& spectrum, SpikeEstimate& est,
                              const InferenceOptions& opts = {}) {
  const std::vector<double> eigs = to_std_vector(spectrum.eigs());
  const double c1 = spectrum.c_n1(), c2 = spectrum.c_n2();
  est.psi_hat = psi(est.alpha_hat, c1, c2, opts.bulk);
  if (opts.psi_sum == PsiPointSum::InsideJ1) {
    est.moments_at_psi =
        empirical_moments(est.psi_hat, eigs, c1, est.J1, static_cast<double>(eigs.size()));
  } else {
    std::vector<std::size_t> outside;
    for (std::size_t i = 0; i < eigs.size(); ++i) {
      if (!std::binary_search(est.J1.begin(), est.J1.end(), i)) outside.push_back(i);
    }
    est.moments_at_psi =
        empirical_moments(est.psi_hat, eigs, c1, outside, static_cast<double>(outside.size()));
  }
  const StieltjesMoments& sm = est.moments_at_psi;
  est.theta_hat = theta(est.alpha_hat, est.psi_hat, c1, c2, sm);
  est.phi_hat = phi(est.alpha_hat, est.psi_hat, c2, sm);
  const NuFactors nu = nu_factors(est.alpha_hat, est.psi_hat, c1, c2, sm);
  est.nu1_hat = nu.nu1;
  est.nu2_hat = nu.nu2;
  double numerator = (opts.q_flag + 1) * est.theta_hat;
  if (opts.betas) numerator += opts.betas->beta_x * nu.nu1 + opts.betas->beta_y * nu.nu2;
  const double sigma_sq = numerator / (est.phi_hat * est.phi_hat);
  if (!(sigma_sq > 0.0) || !std::isfinite(sigma_sq)) {
    fail(ErrorCode::InvalidVariance, "estimated variance is not positive");
  }
  est.sigma_hat = std::sqrt(sigma_sq);
}

/// sqrt(p) (l1 / psi_hat - 1) / sigma_hat.
inline double lambda1_statistic(double l1, double psi_hat, double sigma_hat, Eigen::Index p) {
  if (!(sigma_hat > 0.0)) fail(ErrorCode::InvalidVariance, "sigma_hat must be positive");
  if (psi_hat == 0.0) fail(ErrorCode::DivisionByZero, "psi_hat is zero");
  return std::sqrt(static_cast<double>(p)) * (l1 / psi_hat - 1.0) / sigma_hat;
}

/// Full pipeline: alpha_hat, psi_hat, sigma_hat and the statistic.
inline SpikeEstimate estimate_spike(const FisherSpectrum& spectrum,
                                    const InferenceOptions& opts = {}) {
  SpikeEstimate est = estimate_alpha1(spectrum, opts);
  complete_estimate(spectrum, est, opts);
  est.lambda1_stat = lambda1_statistic(spectrum[0], est.psi_hat, est.sigma_hat, spectrum.p());
  return est;
}

}  // namespace spiked_fisher
