#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "spiked_fisher/clt.hpp"
#include "spiked_fisher/inference.hpp"
#include "spiked_fisher/phase_transition.hpp"
#include "spiked_fisher/stieltjes.hpp"

using namespace spiked_fisher;

namespace {

// Bulk at the LSD quantiles plus one eigenvalue sitting exactly at psi(alpha).
FisherSpectrum synthetic(double alpha, Eigen::Index p, Eigen::Index n1, Eigen::Index n2) {
  const double c1 = static_cast<double>(p) / static_cast<double>(n1);
  const double c2 = static_cast<double>(p) / static_cast<double>(n2);
  std::vector<double> eigs = fisher_lsd_quantiles(c1, c2, static_cast<std::size_t>(p - 1));
  eigs.push_back(psi(alpha, c1, c2, BulkMeasure{}));
  std::sort(eigs.begin(), eigs.end(), std::greater<>());
  return FisherSpectrum(Eigen::Map<Eigen::VectorXd>(eigs.data(), p), n1, n2);
}

}  // namespace

TEST(SelectJ1, RelativeRadius) {
  const std::vector<double> e = {10.0, 9.0, 7.9, 1.0};
  EXPECT_EQ(select_j1(e, 0.2), (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(select_j1(e, 0.25), (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_THROW(select_j1({}, 0.2), Error);
}

TEST(EstimateAlpha, RecoversSpikeOnSyntheticSpectrum) {
  for (double alpha : {20.0, 8.0, 50.0}) {
    const FisherSpectrum s = synthetic(alpha, 800, 4000, 1600);
    const SpikeEstimate e = estimate_alpha1(s);
    EXPECT_EQ(e.J1, (std::vector<std::size_t>{0}));
    EXPECT_NEAR(e.alpha_hat / alpha, 1.0, 5e-3) << alpha;
  }
}

TEST(EstimateSpike, OutsideJ1SumsRecoverSigma) {
  const FisherSpectrum s = synthetic(20.0, 800, 4000, 1600);
  InferenceOptions opts;
  opts.psi_sum = PsiPointSum::OutsideJ1;
  const SpikeEstimate e = estimate_spike(s, opts);
  const CltParams truth = make_clt_params(20.0, 1, 0.2, 0.5);
  EXPECT_NEAR(e.psi_hat / truth.psi, 1.0, 5e-3);
  EXPECT_NEAR(e.theta_hat / truth.theta, 1.0, 0.02);
  EXPECT_NEAR(e.phi_hat / truth.phi, 1.0, 0.02);
  EXPECT_NEAR(e.sigma_hat / std::sqrt(truth.sigma_sq_single), 1.0, 0.02);
  EXPECT_NEAR(e.lambda1_stat, 0.0, 0.2);
}

TEST(EstimateSpike, BinaryBetasLowerSigma) {
  const FisherSpectrum s = synthetic(20.0, 800, 4000, 1600);
  InferenceOptions gauss;
  gauss.psi_sum = PsiPointSum::OutsideJ1;
  InferenceOptions binary = gauss;
  binary.betas = FourthMomentBetas{-2.0, -2.0};
  EXPECT_LT(estimate_spike(s, binary).sigma_hat, estimate_spike(s, gauss).sigma_hat);
}

TEST(EstimateSpike, NoBulkIsAnError) {
  const FisherSpectrum s(Eigen::Vector3d(10.0, 9.5, 9.0), 10, 10);
  try {
    estimate_alpha1(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoBulk);
  }
}

TEST(Lambda1Statistic, Formula) {
  EXPECT_NEAR(lambda1_statistic(44.0, 40.0, 2.0, 100), 10.0 * 0.1 / 2.0, 1e-14);
  EXPECT_THROW(lambda1_statistic(44.0, 40.0, 0.0, 100), Error);
}
