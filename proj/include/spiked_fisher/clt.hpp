#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "spiked_fisher/bulk.hpp"
#include "spiked_fisher/error.hpp"
#include "spiked_fisher/phase_transition.hpp"
#include "spiked_fisher/populations.hpp"
#include "spiked_fisher/random.hpp"
#include "spiked_fisher/stieltjes.hpp"

namespace spiked_fisher {

inline double theta(double alpha, double psi, double c1, double c2, const StieltjesMoments& sm) {
  return c2 + c2 * c2 * psi * psi * sm.m2 + 2.0 * c2 * c2 * psi * sm.m +
         c1 * alpha * alpha * sm.m2_under + 2.0 * c1 * c2 * alpha * sm.m3;
}

inline double phi(double alpha, double psi, double c2, const StieltjesMoments& sm) {
  return 1.0 + c2 * psi * psi * sm.m2 + 2.0 * c2 * psi * sm.m + alpha * psi * sm.m2_under +
         alpha * sm.m_under;
}

struct NuFactors {
  double nu1 = 0.0;
  double nu2 = 0.0;
};

inline NuFactors nu_factors(double alpha, double psi, double c1, double c2,
                            const StieltjesMoments& sm) {
  const double inner = 1.0 + c2 * psi * sm.m;
  return {c1 * alpha * alpha * sm.m_under * sm.m_under, c2 * inner * inner};
}

/// Residual of psi + c2 psi^2 m(psi) + psi m_under(psi) alpha, which vanishes
/// at psi = psi(alpha) for a distant spike.
inline double fixed_point_residual(double alpha, double psi, double c2,
                                   const StieltjesMoments& sm) {
  return psi + c2 * psi * psi * sm.m + psi * sm.m_under * alpha;
}

enum class NoiseModel {
  GaussianFourthMoment,  // beta terms vanish
  GeneralFourthMoment,   // fourth moments enter through beta_x, beta_y
};

/// Variances of the entries of the m_k x m_k Gaussian block; cross-covariances
/// are zero. Entry (i, j) is Var(omega_ij).
struct BlockLaw {
  Eigen::MatrixXd variance;

  Eigen::Index size() const { return variance.rows(); }
  double mean_diag() const { return variance.diagonal().mean(); }
  double mean_offdiag() const {
    const Eigen::Index m = size();
    if (m < 2) return 0.0;
    return (variance.sum() - variance.diagonal().sum()) / static_cast<double>(m * (m - 1));
  }
};

/// Fluctuation parameters of one distant spike.
struct CltParams {
  double alpha = 0.0;
  double psi = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  StieltjesMoments moments;
  double theta = 0.0;
  double phi = 0.0;
  double nu1 = 0.0;
  double nu2 = 0.0;
  int q_flag = 1;
  BlockLaw block;
  double sigma_sq_single = 0.0;  // diag variance / phi^2
  double block_var_diag = 0.0;
  double block_var_offdiag = 0.0;
};

/// The bulk must be a point mass (or an all-equal empirical list): that is the
/// only case with a closed-form LSD density.
inline double bulk_scale(const BulkMeasure& bulk) {
  if (!bulk.is_degenerate()) {
    fail(ErrorCode::Unsupported, "Stieltjes moments need a point-mass bulk");
  }
  return bulk.atoms().front();
}

/// beta tensor entries beta_{ijij} = (sum_t u_ti^2 u_tj^2) * (mu - 2 - q).
inline Eigen::MatrixXd beta_matrix(const Eigen::MatrixXd& fourth_sums, double beta_scalar) {
  return fourth_sums * beta_scalar;
}

inline BlockLaw block_law(double theta_k, const NuFactors& nu, int q_flag, NoiseModel model,
                          const Eigen::MatrixXd& beta_x, const Eigen::MatrixXd& beta_y) {
  const Eigen::Index m = beta_x.rows();
  if (m < 1 || beta_x.cols() != m || beta_y.rows() != m || beta_y.cols() != m) {
    fail(ErrorCode::InvalidDimension, "beta matrices must be m_k x m_k");
  }
  BlockLaw law;
  law.variance = Eigen::MatrixXd::Constant(m, m, theta_k);
  law.variance.diagonal().setConstant((q_flag + 1) * theta_k);
  if (model == NoiseModel::GeneralFourthMoment) {
    law.variance += nu.nu1 * beta_x + nu.nu2 * beta_y;
  }
  return law;
}

/// Everything needed to standardize the sample eigenvalues of one spike.
/// `beta_x`, `beta_y` are the m_k x m_k beta tensors (zero for Gaussian data).
inline CltParams make_clt_params(double alpha, int mult, double c_n1, double c_n2,
                                 const BulkMeasure& bulk, NoiseModel model,
                                 const Eigen::MatrixXd& beta_x, const Eigen::MatrixXd& beta_y,
                                 int q_flag = 1) {
  const PhaseResult phase = classify_spike(alpha, c_n1, c_n2, bulk);
  if (phase.classification != SpikeClass::Distant) {
    fail(ErrorCode::Unsupported, "spike " + std::to_string(alpha) +
                                     " is absorbed; no fluctuation theory applies");
  }
  if (beta_x.rows() != mult) fail(ErrorCode::InvalidDimension, "beta size must equal multiplicity");
  CltParams out;
  out.alpha = alpha;
  out.psi = phase.psi;
  out.c1 = c_n1;
  out.c2 = c_n2;
  out.q_flag = q_flag;
  out.moments = stieltjes_moments_quadrature(out.psi, c_n1, c_n2, bulk_scale(bulk));
  out.theta = theta(alpha, out.psi, c_n1, c_n2, out.moments);
  out.phi = phi(alpha, out.psi, c_n2, out.moments);
  const NuFactors nu = nu_factors(alpha, out.psi, c_n1, c_n2, out.moments);
  out.nu1 = nu.nu1;
  out.nu2 = nu.nu2;
  out.block = block_law(out.theta, nu, q_flag, model, beta_x, beta_y);
  out.block_var_diag = out.block.mean_diag();
  out.block_var_offdiag = out.block.mean_offdiag();
  out.sigma_sq_single = out.block_var_diag / (out.phi * out.phi);
  return out;
}

/// Gaussian-data convenience overload.
inline CltParams make_clt_params(double alpha, int mult, double c_n1, double c_n2,
                                 const BulkMeasure& bulk = BulkMeasure{}) {
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(mult, mult);
  return make_clt_params(alpha, mult, c_n1, c_n2, bulk, NoiseModel::GaussianFourthMoment, zero, zero);
}

/// gamma = sqrt(p - M) (l / psi_n - 1).
inline double standardize(double l, double psi_n, Eigen::Index p, Eigen::Index M) {
  if (psi_n == 0.0) fail(ErrorCode::DivisionByZero, "psi_n is zero");
  if (M > p) fail(ErrorCode::InvalidArgument, "M exceeds p");
  return std::sqrt(static_cast<double>(p - M)) * (l / psi_n - 1.0);
}

/// Draws of the descending eigenvalues of -Omega / phi, Omega symmetric
/// Gaussian with entry variances from the block law. One row per draw.
inline Eigen::MatrixXd multi_spike_law(const BlockLaw& block, double phi_k, Eigen::Index n_draws,
                                       std::uint64_t seed) {
  const Eigen::Index m = block.size();
  if (m < 1) fail(ErrorCode::InvalidDimension, "block must be at least 1 x 1");
  if (phi_k == 0.0) fail(ErrorCode::DivisionByZero, "phi is zero");
  if ((block.variance.array() < 0.0).any()) {
    fail(ErrorCode::InvalidVariance, "block variances must be nonnegative");
  }
  const Eigen::MatrixXd sd = block.variance.cwiseSqrt();
  Xoshiro256pp rng(seed);
  NormalSampler normal;
  Eigen::MatrixXd out(n_draws, m);
  Eigen::MatrixXd omega(m, m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  for (Eigen::Index r = 0; r < n_draws; ++r) {
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = i; j < m; ++j) {
        const double w = sd(i, j) * normal(rng);
        omega(i, j) = w;
        omega(j, i) = w;
      }
    }
    if (m == 1) {
      out(r, 0) = -omega(0, 0) / phi_k;
      continue;
    }
    es.compute(-omega / phi_k, Eigen::EigenvaluesOnly);
    out.row(r) = es.eigenvalues().reverse().transpose();
  }
  return out;
}

}  // namespace spiked_fisher
