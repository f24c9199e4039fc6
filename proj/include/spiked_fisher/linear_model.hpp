#pragma once

#include <cmath>
#include <limits>
#include <optional>

#include <Eigen/Dense>

#include "spiked_fisher/error.hpp"
#include "spiked_fisher/fisher.hpp"
#include "spiked_fisher/stats.hpp"
#include "spiked_fisher/tracy_widom.hpp"

namespace spiked_fisher {

/// Geometry of a largest-root test on a Fisher pencil with n1 "hypothesis"
/// and n2 "error" degrees of freedom. For the linear model n1 = q1 and
/// n2 = n - q0; for signal detection n1 = m and n2 = T.
struct RoySetup {
  Eigen::Index p = 0;
  Eigen::Index n = 0;
  Eigen::Index q0 = 0;
  Eigen::Index q1 = 0;
  Eigen::Index q2 = 0;
  double c1_tilde = 0.0;
  double c2_tilde = 0.0;
  double h = 0.0;
  double psi0 = 0.0;
  double sigma_tw = 0.0;
  double tw_quantile = 0.0;
  double level = 0.05;

  Eigen::Index n1() const { return q1; }
  Eigen::Index n2() const { return n - q0; }
};

namespace detail {

inline RoySetup finish_setup(RoySetup s) {
  if (!(s.level > 0.0 && s.level < 1.0)) fail(ErrorCode::InvalidArgument, "level must lie in (0, 1)");
  const double n1 = static_cast<double>(s.n1()), n2 = static_cast<double>(s.n2());
  const double p = static_cast<double>(s.p);
  s.c1_tilde = p / n1;
  s.c2_tilde = p / n2;
  if (!(s.c2_tilde < 1.0)) fail(ErrorCode::InvalidArgument, "need n - q0 > p");
  const double c1 = s.c1_tilde, c2 = s.c2_tilde;
  s.h = std::sqrt(c1 + c2 - c1 * c2);
  s.psi0 = (1.0 + s.h) * (1.0 + s.h) / ((1.0 - c2) * (1.0 - c2));
  const double inner = (c1 + c2) * (c1 + c2) - c2 * (c1 + s.h) * (c1 + s.h);
  if (std::abs(inner) < 1e-14) fail(ErrorCode::DegenerateGeometry, "sigma_tw denominator vanishes");
  const double dof = n2 + n1;
  const double cube = c1 * c1 * std::pow(c1 + s.h, 4) * std::pow(c1 + c2, 6) /
                      (dof * dof * s.h * c2 * c2 * std::pow(inner, 4));
  s.sigma_tw = std::cbrt(cube);
  s.tw_quantile = tw1_quantile(1.0 - s.level);
  return s;
}

}  // namespace detail

inline RoySetup make_roy_setup(Eigen::Index p, Eigen::Index n, Eigen::Index q0, Eigen::Index q1,
                               double level = 0.05) {
  if (p < 1 || q1 < 1 || q0 < q1) fail(ErrorCode::InvalidArgument, "need p >= 1 and q0 >= q1 >= 1");
  if (n < p + q0) fail(ErrorCode::InvalidArgument, "need n >= p + q0");
  RoySetup s;
  s.p = p;
  s.n = n;
  s.q0 = q0;
  s.q1 = q1;
  s.q2 = q0 - q1;
  s.level = level;
  return detail::finish_setup(s);
}

/// Same calibration for a two-sample pencil with n1 and n2 degrees of freedom.
inline RoySetup make_pencil_setup(Eigen::Index p, Eigen::Index n1, Eigen::Index n2,
                                  double level = 0.05) {
  if (p < 1 || n1 < 1 || n2 < 1) fail(ErrorCode::InvalidArgument, "dimensions must be positive");
  RoySetup s;
  s.p = p;
  s.q1 = n1;
  s.q0 = n1;
  s.q2 = 0;
  s.n = n2 + n1;
  s.level = level;
  return detail::finish_setup(s);
}

inline double roy_threshold(const RoySetup& setup) {
  return setup.psi0 + setup.sigma_tw * setup.tw_quantile;
}

inline bool roy_decide(double l1, double threshold) { return l1 > threshold; }

/// Phi(-sqrt(p) (threshold - psi_n1) / (psi_n1 sigma1)).
inline double roy_power(double psi_n1, double sigma1, Eigen::Index p, const RoySetup& setup) {
  if (!(sigma1 > 0.0) || !(psi_n1 > 0.0)) {
    fail(ErrorCode::InvalidArgument, "psi_n1 and sigma1 must be positive");
  }
  const double arg =
      -std::sqrt(static_cast<double>(p)) * (roy_threshold(setup) - psi_n1) / (psi_n1 * sigma1);
  return normal_cdf(arg);
}

struct LinearModelFit {
  Eigen::MatrixXd B_hat;  // p x q0
  Eigen::MatrixXd G;      // p x p
  Eigen::MatrixXd H;      // p x p
};

/// Least-squares fit of W = B Z + E. The first q1 rows of Z carry the tested
/// coefficients B1; H is built around the hypothesised B1 (default 0).
inline LinearModelFit fit_mvlm(const Eigen::MatrixXd& W, const Eigen::MatrixXd& Z, Eigen::Index q1,
                               const std::optional<Eigen::MatrixXd>& B10 = std::nullopt) {
  const Eigen::Index p = W.rows(), n = W.cols(), q0 = Z.rows();
  if (Z.cols() != n) fail(ErrorCode::InvalidDimension, "W and Z need the same number of columns");
  if (q1 < 1 || q1 > q0) fail(ErrorCode::InvalidArgument, "need 1 <= q1 <= q0");
  if (n < p + q0) fail(ErrorCode::InvalidArgument, "need n >= p + q0");
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Z.transpose());
  if (qr.rank() < q0) fail(ErrorCode::DesignRank, "design matrix is rank deficient");

  LinearModelFit fit;
  fit.B_hat = qr.solve(W.transpose()).transpose();
  const Eigen::MatrixXd resid = W - fit.B_hat * Z;
  fit.G = resid * resid.transpose();

  const Eigen::Index q2 = q0 - q1;
  const Eigen::MatrixXd zz = Z * Z.transpose();
  Eigen::MatrixXd a112 = zz.topLeftCorner(q1, q1);
  if (q2 > 0) {
    const Eigen::MatrixXd z22 = zz.bottomRightCorner(q2, q2);
    const Eigen::MatrixXd z12 = zz.topRightCorner(q1, q2);
    a112 -= z12 * z22.ldlt().solve(z12.transpose());
  }
  Eigen::MatrixXd diff = fit.B_hat.leftCols(q1);
  if (B10) {
    if (B10->rows() != p || B10->cols() != q1) fail(ErrorCode::InvalidDimension, "B10 must be p x q1");
    diff -= *B10;
  }
  fit.H = diff * a112 * diff.transpose();
  return fit;
}

/// l1 = (n - q0)/q1 * largest eigenvalue of H G^{-1}, as the top of the
/// pencil (H/q1, G/(n - q0)).
inline FisherSpectrum roy_spectrum(const LinearModelFit& fit, Eigen::Index n, Eigen::Index q0,
                                   Eigen::Index q1) {
  const double n2 = static_cast<double>(n - q0);
  return fisher_eigenvalues(fit.H / static_cast<double>(q1), fit.G / n2, q1, n - q0);
}

/// Orthonormal bases of the design row space, with the q1 columns that
/// carry the tested rows separated from those of the nuisance rows.
/// G = W (I - Q Q^T) W^T and H = (W - B10 Z1) Q1 Q1^T (W - B10 Z1)^T.
class RoyProjector {
 public:
  RoyProjector(const Eigen::MatrixXd& Z, Eigen::Index q1) : q0_(Z.rows()), q1_(q1), n_(Z.cols()) {
    if (q1 < 1 || q1 > q0_) fail(ErrorCode::InvalidArgument, "need 1 <= q1 <= q0");
    const Eigen::Index q2 = q0_ - q1;
    // Nuisance rows first so that the trailing q1 columns span the part of
    // Z1 orthogonal to Z2.
    Eigen::MatrixXd zt(n_, q0_);
    zt.leftCols(q2) = Z.bottomRows(q2).transpose();
    zt.rightCols(q1) = Z.topRows(q1).transpose();
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(zt);
    const Eigen::MatrixXd r = qr.matrixQR().topRows(q0_).triangularView<Eigen::Upper>();
    if ((r.diagonal().array().abs() < 1e-12 * r.diagonal().cwiseAbs().maxCoeff()).any()) {
      fail(ErrorCode::DesignRank, "design matrix is rank deficient");
    }
    q_ = qr.householderQ() * Eigen::MatrixXd::Identity(n_, q0_);
    z1q1_ = Z.topRows(q1) * q_.rightCols(q1);
  }

  /// Statistic spectrum for responses W (B2 Z2 drops out of both G and H).
  FisherSpectrum spectrum(const Eigen::MatrixXd& W,
                          const std::optional<Eigen::MatrixXd>& B10 = std::nullopt) const {
    if (W.cols() != n_) fail(ErrorCode::InvalidDimension, "W must have n columns");
    const Eigen::MatrixXd wq = W * q_;
    Eigen::MatrixXd hq = wq.rightCols(q1_);
    if (B10) hq -= *B10 * z1q1_;
    return assemble(W, wq, hq);
  }

  /// Same statistic for W = B1 Z1 + B2 Z2 + E given only (E, B1).
  FisherSpectrum spectrum_from_noise(const Eigen::MatrixXd& E, const Eigen::MatrixXd& B1) const {
    if (E.cols() != n_) fail(ErrorCode::InvalidDimension, "E must have n columns");
    const Eigen::MatrixXd eq = E * q_;
    Eigen::MatrixXd hq = eq.rightCols(q1_);
    if (B1.size() > 0) hq += B1 * z1q1_;
    return assemble(E, eq, hq);
  }

  Eigen::Index n() const { return n_; }
  Eigen::Index q0() const { return q0_; }
  Eigen::Index q1() const { return q1_; }
  const Eigen::MatrixXd& z1q1() const { return z1q1_; }

 private:
  FisherSpectrum assemble(const Eigen::MatrixXd& full, const Eigen::MatrixXd& projected,
                          const Eigen::MatrixXd& hq) const {
    const double n2 = static_cast<double>(n_ - q0_);
    Eigen::MatrixXd g = detail::gram(full) * static_cast<double>(n_);
    g.noalias() -= projected * projected.transpose();
    const Eigen::MatrixXd h = hq * hq.transpose();
    return fisher_eigenvalues(h / static_cast<double>(q1_), g / n2, q1_, n_ - q0_);
  }

  Eigen::Index q0_;
  Eigen::Index q1_;
  Eigen::Index n_;
  Eigen::MatrixXd q_;
  Eigen::MatrixXd z1q1_;
};

}  // namespace spiked_fisher
