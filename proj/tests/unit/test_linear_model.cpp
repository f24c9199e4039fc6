#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "spiked_fisher/linear_model.hpp"
#include "spiked_fisher/montecarlo.hpp"
#include "spiked_fisher/signal.hpp"

using namespace spiked_fisher;

TEST(RoySetup, Geometry) {
  const RoySetup s = make_roy_setup(50, 110, 50, 10);
  EXPECT_DOUBLE_EQ(s.c1_tilde, 5.0);
  EXPECT_NEAR(s.c2_tilde, 50.0 / 60.0, 1e-15);
  const double h = std::sqrt(s.c1_tilde + s.c2_tilde - s.c1_tilde * s.c2_tilde);
  EXPECT_NEAR(s.psi0, std::pow(1 + h, 2) / std::pow(1 - s.c2_tilde, 2), 1e-12);
  EXPECT_GT(s.sigma_tw, 0.0);
  EXPECT_NEAR(roy_threshold(s), s.psi0 + s.sigma_tw * tw1_quantile(0.95), 1e-12);
  EXPECT_THROW(make_roy_setup(50, 90, 50, 10), Error);
  EXPECT_THROW(make_roy_setup(50, 200, 5, 10), Error);
}

TEST(RoySetup, PsiZeroIsUpperEdgeOfNullLaw) {
  const RoySetup s = make_pencil_setup(50, 100, 200);
  EXPECT_NEAR(s.psi0, fisher_lsd_support(0.5, 0.25).b, 1e-12);
}

TEST(RoyPower, IncreasesWithPsi) {
  const RoySetup s = make_pencil_setup(50, 100, 200);
  double prev = 0.0;
  for (double psi_n1 = 0.5 * s.psi0; psi_n1 < 4.0 * s.psi0; psi_n1 += 0.1) {
    const double pw = roy_power(psi_n1, 1.0, 50, s);
    EXPECT_GE(pw, prev);
    prev = pw;
  }
  EXPECT_THROW(roy_power(1.0, 0.0, 50, s), Error);
}

TEST(SpikePowerTest, AbsorbedGivesLevelAndGridIsMonotone) {
  const RoySetup s = make_pencil_setup(50, 100, 200);
  EXPECT_DOUBLE_EQ(spike_power(1.0, s).power, 0.05);
  EXPECT_DOUBLE_EQ(spike_power(2.0, s).power, 0.05);
  EXPECT_EQ(spike_power(2.0, s).classification, SpikeClass::AbsorbedUpper);
  double prev = 0.0;
  for (double b = 1.0; b <= 8.0; b += 0.05) {
    const double pw = spike_power(b, s).power;
    EXPECT_GE(pw, prev) << b;
    prev = pw;
  }
  EXPECT_GT(spike_power(6.0, s).power, 0.9);
}

TEST(LinearModel, ProjectorMatchesLeastSquaresFit) {
  const Eigen::Index p = 8, n = 60, q0 = 5, q1 = 2;
  const Eigen::MatrixXd Z = sample_matrix({}, q0, n, 1).array() + 1.0;
  const Eigen::MatrixXd B = sample_matrix({}, p, q0, 2);
  const Eigen::MatrixXd E = sample_matrix({}, p, n, 3);
  const Eigen::MatrixXd W = B * Z + E;
  const Eigen::MatrixXd B10 = sample_matrix({}, p, q1, 4);

  const LinearModelFit fit = fit_mvlm(W, Z, q1, B10);
  const FisherSpectrum direct = roy_spectrum(fit, n, q0, q1);
  const RoyProjector projector(Z, q1);
  const FisherSpectrum projected = projector.spectrum(W, B10);
  for (Eigen::Index i = 0; i < p; ++i) EXPECT_NEAR(direct[i], projected[i], 1e-9 * direct[0]);

  // spectrum_from_noise ignores B2 and matches the full response model.
  const Eigen::MatrixXd B1 = B.leftCols(q1);
  const FisherSpectrum from_noise = projector.spectrum_from_noise(E, B1);
  const FisherSpectrum full = projector.spectrum(W);
  for (Eigen::Index i = 0; i < p; ++i) EXPECT_NEAR(from_noise[i], full[i], 1e-9 * full[0]);
}

TEST(LinearModel, StatisticIsScaledRootOfHGinv) {
  const Eigen::Index p = 6, n = 40, q0 = 4, q1 = 2;
  const Eigen::MatrixXd Z = sample_matrix({}, q0, n, 11);
  const Eigen::MatrixXd W = sample_matrix({}, p, n, 12);
  const LinearModelFit fit = fit_mvlm(W, Z, q1);
  Eigen::EigenSolver<Eigen::MatrixXd> es(fit.H * fit.G.inverse(), false);
  const double top = es.eigenvalues().real().maxCoeff();
  EXPECT_NEAR(roy_spectrum(fit, n, q0, q1)[0], top * static_cast<double>(n - q0) / q1, 1e-9);
}

TEST(LinearModel, RankDeficientDesign) {
  Eigen::MatrixXd Z = sample_matrix({}, 3, 30, 1);
  Z.row(2) = Z.row(1);
  EXPECT_THROW(fit_mvlm(sample_matrix({}, 4, 30, 2), Z, 1), Error);
  EXPECT_THROW(RoyProjector(Z, 1), Error);
}

TEST(SizePower, InfiniteThresholdNeverRejects) {
  SizePowerConfig cfg;
  cfg.geometry = make_roy_geometry(20, 2.0, 0.5, 0.8);
  cfg.replications = 20;
  cfg.threshold_override = std::numeric_limits<double>::infinity();
  const SizePowerResult r = size_power_run(cfg);
  EXPECT_EQ(r.size, 0.0);
  EXPECT_EQ(r.power, 0.0);
}

TEST(SizePower, GeometryRounding) {
  const RoyGeometry g = make_roy_geometry(50, 5.0, 0.8, 0.2);
  EXPECT_EQ(g.q1, 10);
  EXPECT_EQ(g.q0, 50);
  EXPECT_EQ(g.n - g.q0, 62);
  EXPECT_EQ(table2_geometries().size(), 36u);
  EXPECT_THROW(make_roy_geometry(50, 5.0, 1.0, 0.2), Error);
}

TEST(RoyNull, RegressionRootMatchesWishartRoot) {
  SizePowerConfig cfg;
  cfg.geometry = make_roy_geometry(20, 2.0, 0.5, 0.5);
  cfg.replications = 400;
  cfg.seed = 99;
  const NullRootSamples s = roy_null_roots(cfg);
  EXPECT_GT(ks_two_sample(s.regression, s.wishart).p_value, 0.01);
}

TEST(Signal, PopulationSpike) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(10, 1);
  A(0, 0) = 2.0;
  const SignalSetup s = make_signal_setup(A, Eigen::MatrixXd::Identity(10, 10), 30, 40);
  EXPECT_NEAR(s.beta1, 5.0, 1e-12);
  EXPECT_THROW(make_signal_setup(A, Eigen::MatrixXd::Identity(10, 10), 30, 10), Error);
  const SignalSample x = signal_simulate(s, 3);
  EXPECT_EQ(x.Y.cols(), 30);
  EXPECT_EQ(x.Z.cols(), 40);
  EXPECT_EQ(signal_fisher(x.Y, x.Z).p(), 10);
}

TEST(Signal, AlternativeBeta1) {
  Eigen::MatrixXd b1 = Eigen::MatrixXd::Zero(3, 2);
  b1(0, 0) = 1.0;
  Eigen::MatrixXd z1q1 = Eigen::MatrixXd::Zero(2, 5);
  z1q1(0, 0) = 2.0;
  EXPECT_NEAR(roy_alternative_beta1(b1, z1q1), 1.0 + 4.0 / 2.0, 1e-14);
}
