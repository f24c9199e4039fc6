#include <cmath>
#include <vector>

#include <boost/math/tools/roots.hpp>
#include <gtest/gtest.h>

#include "spiked_fisher/phase_transition.hpp"
#include "spiked_fisher/random.hpp"
#include "spiked_fisher/stieltjes.hpp"

using namespace spiked_fisher;

namespace {

// Unit point-mass bulk: psi(a) = a (1 - a - c1) / (1 - a (1 - c2)).
double psi_closed(double a, double c1, double c2) { return a * (1.0 - a - c1) / (1.0 - a * (1.0 - c2)); }

double psi_prime_closed(double a, double c1, double c2) {
  const double k = 1.0 - c2;
  const double n = a * (1.0 - a - c1), dn = 1.0 - 2.0 * a - c1;
  const double d = 1.0 - k * a, dd = -k;
  return (dn * d - n * dd) / (d * d);
}

// Critical points solve (1 - c2) a^2 - 2 a + (1 - c1) = 0.
std::pair<double, double> critical_closed(double c1, double c2) {
  const double k = 1.0 - c2, r = std::sqrt(1.0 - k * (1.0 - c1));
  return {(1.0 - r) / k, (1.0 + r) / k};
}

}  // namespace

TEST(Psi, ReferenceSpikes) {
  const BulkMeasure unit;
  EXPECT_NEAR(psi(20.0, 0.2, 0.5, unit), 42.667, 5e-4);
  EXPECT_NEAR(psi(0.2, 0.2, 0.5, unit), 0.1333, 5e-5);
  EXPECT_NEAR(psi(0.1, 0.2, 0.5, unit), 0.0737, 5e-5);
}

TEST(Psi, MatchesClosedForm) {
  const BulkMeasure unit;
  for (double a : {0.05, 0.3, 5.0, 7.5, 100.0}) {
    EXPECT_NEAR(psi(a, 0.3, 0.4, unit), psi_closed(a, 0.3, 0.4), 1e-12 * std::abs(psi_closed(a, 0.3, 0.4)));
  }
}

TEST(Psi, EmpiricalBulkOfOnesEqualsPointMass) {
  const BulkMeasure ones = BulkMeasure::empirical(std::vector<double>(196, 1.0));
  EXPECT_NEAR(psi(20.0, 0.2, 0.5, ones), psi(20.0, 0.2, 0.5, BulkMeasure{}), 1e-12);
}

TEST(Psi, ScaledPointMassIsEquivariant) {
  const BulkMeasure two = BulkMeasure::point_mass(2.0);
  EXPECT_NEAR(psi(40.0, 0.2, 0.5, two), 2.0 * psi(20.0, 0.2, 0.5, BulkMeasure{}), 1e-10);
}

TEST(Psi, DomainAndPole) {
  const BulkMeasure unit;
  try {
    psi(1.0, 0.2, 0.5, unit);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Domain);
  }
  const BulkMeasure spread = BulkMeasure::empirical({0.5, 1.0, 1.5});
  EXPECT_THROW(psi(1.2, 0.2, 0.5, spread), Error);
  // Pole at a = 1 / (1 - c2) = 2.
  try {
    psi(2.0, 0.2, 0.5, unit);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Pole);
  }
}

TEST(PsiPrime, MatchesClosedForm) {
  const BulkMeasure unit;
  for (double a : {0.05, 0.3, 5.0, 20.0, 100.0}) {
    const double want = psi_prime_closed(a, 0.2, 0.5);
    EXPECT_NEAR(psi_prime(a, 0.2, 0.5, unit), want, 1e-6 * std::abs(want)) << a;
  }
}

TEST(Classify, ReferenceSpikesAreDistant) {
  const BulkMeasure unit;
  for (double a : {20.0, 0.2, 0.1}) {
    const PhaseResult r = classify_spike(a, 0.2, 0.5, unit);
    EXPECT_EQ(r.classification, SpikeClass::Distant) << a;
    EXPECT_GT(r.psi_prime, 0.0);
    EXPECT_EQ(r.rho, r.psi);
  }
}

TEST(Classify, AbsorbedAboveLandsOnUpperEdge) {
  const BulkMeasure unit;
  const auto [lo, hi] = critical_closed(0.2, 0.5);
  const LsdSupport s = fisher_lsd_support(0.2, 0.5);
  for (double a : {1.2, 1.9, 2.5, 3.4}) {
    const PhaseResult r = classify_spike(a, 0.2, 0.5, unit);
    EXPECT_EQ(r.classification, SpikeClass::AbsorbedUpper) << a;
    EXPECT_NEAR(r.critical_point, hi, 1e-8) << a;
    EXPECT_NEAR(r.rho, s.b, 1e-8) << a;
  }
  (void)lo;
}

TEST(Classify, AbsorbedBelowLandsOnLowerEdge) {
  const BulkMeasure unit;
  const auto [lo, hi] = critical_closed(0.2, 0.5);
  const LsdSupport s = fisher_lsd_support(0.2, 0.5);
  for (double a : {0.5, 0.7, 0.95}) {
    const PhaseResult r = classify_spike(a, 0.2, 0.5, unit);
    EXPECT_EQ(r.classification, SpikeClass::AbsorbedLower) << a;
    EXPECT_NEAR(r.critical_point, lo, 1e-8) << a;
    EXPECT_NEAR(r.rho, s.a, 1e-8) << a;
  }
  (void)hi;
}

TEST(Classify, CriticalPointAgreesWithRootFinder) {
  // Boost TOMS748 on the closed-form derivative as an independent oracle.
  const BulkMeasure unit;
  for (double c1 : {0.1, 0.5, 0.9}) {
    for (double c2 : {0.1, 0.3, 0.6}) {
      auto f = [&](double a) { return psi_prime_closed(a, c1, c2); };
      boost::uintmax_t iters = 200;
      const double pole = 1.0 / (1.0 - c2);
      const auto root = boost::math::tools::toms748_solve(
          f, pole * (1.0 + 1e-9), 50.0, boost::math::tools::eps_tolerance<double>(50), iters);
      const double want = 0.5 * (root.first + root.second);
      const PhaseResult r = classify_spike(1.0 + 0.5 * (want - 1.0), c1, c2, unit);
      ASSERT_EQ(r.classification, SpikeClass::AbsorbedUpper);
      EXPECT_NEAR(r.critical_point, want, 1e-8 * want);
    }
  }
}

TEST(Classify, RandomDistantSpikesHavePositiveSlope) {
  const BulkMeasure unit;
  const auto [lo, hi] = critical_closed(0.2, 0.5);
  Xoshiro256pp rng(2024);
  for (int i = 0; i < 20; ++i) {
    const bool up = i % 2 == 0;
    const double a = up ? hi + 1.0 + 50.0 * rng.uniform01() : lo * (0.05 + 0.9 * rng.uniform01());
    const PhaseResult r = classify_spike(a, 0.2, 0.5, unit);
    EXPECT_EQ(r.classification, SpikeClass::Distant) << a;
    EXPECT_NEAR(r.psi_prime, psi_prime_closed(a, 0.2, 0.5), 1e-6 * std::abs(r.psi_prime));
  }
}

TEST(Classify, MonotoneAboveTheThreshold) {
  const BulkMeasure unit;
  double prev = 0.0;
  for (double a = 4.0; a < 60.0; a += 0.5) {
    const double v = psi(a, 0.2, 0.5, unit);
    EXPECT_GT(v, prev);
    prev = v;
  }
}
