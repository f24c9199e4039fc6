#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include <Eigen/Dense>

#include "spiked_fisher/bulk.hpp"
#include "spiked_fisher/clt.hpp"
#include "spiked_fisher/covariance.hpp"
#include "spiked_fisher/error.hpp"
#include "spiked_fisher/fisher.hpp"
#include "spiked_fisher/linear_model.hpp"
#include "spiked_fisher/phase_transition.hpp"
#include "spiked_fisher/populations.hpp"
#include "spiked_fisher/random.hpp"

namespace spiked_fisher {

/// y_t = A x_t + Sigma^{1/2} e_t observed m times; noise-only z_t = Sigma^{1/2} r_t
/// observed T times.
struct SignalSetup {
  Eigen::Index p = 0;
  Eigen::Index k = 0;
  Eigen::Index m = 0;
  Eigen::Index T = 0;
  Eigen::MatrixXd A;
  Eigen::MatrixXd Sigma;
  double beta1 = 1.0;  // largest eigenvalue of Sigma^{-1}(A A^T + Sigma)
};

inline SignalSetup make_signal_setup(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Sigma,
                                     Eigen::Index m, Eigen::Index T) {
  const Eigen::Index p = Sigma.rows();
  if (Sigma.cols() != p || A.rows() != p) fail(ErrorCode::InvalidDimension, "A must be p x k, Sigma p x p");
  if (m < 1 || T < 1) fail(ErrorCode::InvalidDimension, "m and T must be positive");
  if (T <= p) fail(ErrorCode::SingularMatrix, "T must exceed p for an invertible noise covariance");
  SignalSetup s;
  s.p = p;
  s.k = A.cols();
  s.m = m;
  s.T = T;
  s.A = A;
  s.Sigma = Sigma;
  s.beta1 = pencil_eigenvalues(A * A.transpose() + Sigma, Sigma)(0);
  return s;
}

struct SignalSample {
  Eigen::MatrixXd Y;
  Eigen::MatrixXd Z;
};

inline SignalSample signal_simulate(const SignalSetup& setup, std::uint64_t seed) {
  if (setup.T <= setup.p) fail(ErrorCode::SingularMatrix, "T must exceed p");
  const PopulationKind gauss{};
  const Eigen::MatrixXd root = symmetric_power(setup.Sigma, 0.5);
  SignalSample out;
  out.Y = root * sample_matrix(gauss, setup.p, setup.m, derive_seed(seed, 0, 1));
  if (setup.k > 0) out.Y += setup.A * sample_matrix(gauss, setup.k, setup.m, derive_seed(seed, 0, 0));
  out.Z = root * sample_matrix(gauss, setup.p, setup.T, derive_seed(seed, 0, 2));
  return out;
}

/// Spectrum of (T/m)(Z Z^T)^{-1}(Y Y^T) through the pencil (Y Y^T/m, Z Z^T/T).
inline FisherSpectrum signal_fisher(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& Z) {
  if (Y.rows() != Z.rows()) fail(ErrorCode::InvalidDimension, "Y and Z need the same row count");
  return fisher_eigenvalues(detail::gram(Y), detail::gram(Z), Y.cols(), Z.cols());
}

struct SpikePower {
  double beta1 = 1.0;
  double psi_n1 = 0.0;
  double sigma1 = 0.0;
  double power = 0.0;
  SpikeClass classification = SpikeClass::Distant;
};

/// Analytic rejection probability of the largest-root test when the pencil
/// carries one population spike beta1 over a unit bulk. Spikes that do not
/// separate from the bulk leave the top root on its null law, so the power
/// is the nominal level there. A spike only pushes the top root up, so the
/// Gaussian approximation is floored at the level just past the transition.
inline SpikePower spike_power(double beta1, const RoySetup& setup) {
  SpikePower out;
  out.beta1 = beta1;
  const BulkMeasure unit;
  const double c1 = setup.c1_tilde, c2 = setup.c2_tilde;
  if (unit.in_support(beta1) || beta1 < unit.support_min()) {
    out.classification = SpikeClass::AbsorbedUpper;
    out.psi_n1 = setup.psi0;
    out.power = setup.level;
    return out;
  }
  const PhaseResult phase = classify_spike(beta1, c1, c2, unit);
  out.classification = phase.classification;
  out.psi_n1 = phase.rho;
  if (phase.classification != SpikeClass::Distant) {
    out.power = setup.level;
    return out;
  }
  const CltParams params = make_clt_params(beta1, 1, c1, c2, unit);
  out.sigma1 = std::sqrt(params.sigma_sq_single);
  out.power = std::max(setup.level, roy_power(out.psi_n1, out.sigma1, setup.p, setup));
  return out;
}

/// Signal-detection calibration: c1 = p/m, c2 = p/T.
inline RoySetup signal_roy_setup(const SignalSetup& s, double level = 0.05) {
  return make_pencil_setup(s.p, s.m, s.T, level);
}

inline SpikePower signal_power(double beta1, const RoySetup& setup) {
  return spike_power(beta1, setup);
}

/// Population spike induced by a tested coefficient block B1 in the linear
/// model: 1 + lambda_max(B1 A11:2 B1^T)/q1 with A11:2 = (Z1 Q1)(Z1 Q1)^T.
inline double roy_alternative_beta1(const Eigen::MatrixXd& B1, const Eigen::MatrixXd& z1q1) {
  const Eigen::MatrixXd a112 = z1q1 * z1q1.transpose();
  const Eigen::MatrixXd m = B1 * a112 * B1.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return 1.0 + es.eigenvalues().maxCoeff() / static_cast<double>(B1.cols());
}

}  // namespace spiked_fisher
