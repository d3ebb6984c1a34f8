#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bernphase/classify.hpp"
#include "support.hpp"

using namespace bernphase;

namespace {
const double kLog2 = std::log(2.0);
}

TEST(Classify, ThresholdExamples) {
  EXPECT_EQ(classify_tree_action(kLog2, 0.9165, false).phase, Phase::WeaklyMixing);
  EXPECT_EQ(classify_tree_action(kLog2, 0.6, false).phase, Phase::Dissipative);
  const double crit = std::sqrt(0.5);
  EXPECT_EQ(classify_tree_action(kLog2, crit, true).phase, Phase::CriticalDissipative);
  EXPECT_EQ(classify_tree_action(kLog2, crit, false).phase, Phase::CriticalUnknown);
  EXPECT_NEAR(classify_tree_action(kLog2, 0.5, false).threshold, 0.7071067811865476, 1e-15);
  EXPECT_THROW(classify_tree_action(0.0, 0.5, false), Error);
  EXPECT_THROW(classify_tree_action(kLog2, 0.0, false), Error);
}

TEST(Classify, MonotoneInAffinity) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> ua(0.01, 1.0), ud(0.05, 3.0);
  for (int i = 0; i < 200; ++i) {
    const double delta = ud(rng);
    std::vector<double> as(20);
    for (auto& a : as) a = ua(rng);
    std::sort(as.begin(), as.end());
    int prev = -1;
    for (double a : as) {
      const int rank = phase_rank(classify_tree_action(delta, a, false).phase);
      EXPECT_GE(rank, prev);
      prev = rank;
    }
  }
}

TEST(Krieger, Trichotomy) {
  const MeasurePair same(make_measure({0.3, 0.7}), make_measure({0.3, 0.7}));
  EXPECT_EQ(krieger_type(same).krieger.kind, KriegerKind::FlowIsTranslation);
  const MeasurePair lattice(make_measure({1.0 / 3, 2.0 / 3}), make_measure({2.0 / 3, 1.0 / 3}));
  const auto l = krieger_type(lattice);
  ASSERT_EQ(l.krieger.kind, KriegerKind::TypeIIIlambda);
  EXPECT_NEAR(*l.krieger.lambda, 0.25, 1e-9);
  const MeasurePair dense(make_measure({0.5, 0.3, 0.2}), make_measure({0.2, 0.5, 0.3}));
  EXPECT_EQ(krieger_type(dense).krieger.kind, KriegerKind::TypeIII1);
}

TEST(Krieger, FlowOfWeightsUsesModularGenerators) {
  const MeasurePair lattice(make_measure({1.0 / 3, 2.0 / 3}), make_measure({2.0 / 3, 1.0 / 3}));
  const std::vector<double> gens{std::log(3.0)};
  const auto r = krieger_type(lattice, gens);
  EXPECT_EQ(r.krieger.kind, KriegerKind::TypeIIIlambda);
  EXPECT_EQ(r.flow_of_weights.kind, KriegerKind::TypeIII1);
}

TEST(Krieger, RecoversScaledLambda) {
  // log-ratios {+-k a}: mu0 = (e^{ka}, 1)/Z, mu1 = (1, e^{ka})/Z
  for (double a : {0.1, 0.37, 0.9, 1.7}) {
    const double e = std::exp(a);
    const MeasurePair p(make_measure({e / (1 + e), 1 / (1 + e)}), make_measure({1 / (1 + e), e / (1 + e)}));
    const auto r = krieger_type(p);
    ASSERT_EQ(r.krieger.kind, KriegerKind::TypeIIIlambda);
    EXPECT_NEAR(*r.krieger.lambda, std::exp(-2 * a), 1e-9 * std::exp(-2 * a));
  }
}

TEST(Spectral, BranchesAndRegimes) {
  for (int d = 2; d <= 6; ++d) {
    const double m = 2.0 * d - 1.0;
    const double kink = std::pow(m, -0.25);
    EXPECT_NEAR(spectral_upper_branch(d, kink), spectral_lower_branch(d), 1e-12);
    EXPECT_NEAR(spectral_radius_free(d, 1.0).rho_action, 1.0, 1e-15);
    EXPECT_EQ(spectral_radius_free(d, std::pow(m, -0.5)).regime, SpectralRegime::Dissipative);
    EXPECT_EQ(spectral_radius_free(d, std::nextafter(std::pow(m, -0.5), 1.0)).regime,
              SpectralRegime::WeaklyMixingNonamenable);
    EXPECT_EQ(spectral_radius_free(d, kink).regime, SpectralRegime::WeaklyMixingNonamenable);
    EXPECT_EQ(spectral_radius_free(d, std::nextafter(kink, 1.0)).regime, SpectralRegime::StronglyErgodic);
  }
  EXPECT_NEAR(spectral_radius_free(2, 0.9).rho_action, 0.9161419753086419, 1e-15);
  EXPECT_NEAR(spectral_radius_free(2, 0.5).rho_group, std::sqrt(3.0) / 2, 1e-15);
}

TEST(Spectral, ActionDominatesGroupAndIsMonotone) {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> ua(0.01, 1.0);
  std::uniform_int_distribution<int> ud(2, 8);
  for (int i = 0; i < 500; ++i) {
    const int d = ud(rng);
    const auto r = spectral_radius_free(d, ua(rng));
    EXPECT_GE(r.rho_action, r.rho_group - 1e-15);
  }
  for (int d = 2; d <= 6; ++d) {
    const double kink = std::pow(2.0 * d - 1.0, -0.25);
    double prev = 0;
    for (int k = 0; k <= 200; ++k) {
      const double a = kink + (1 - kink) * k / 200.0;
      const double rho = spectral_radius_free(d, a).rho_action;
      EXPECT_GE(rho, prev - 1e-15);
      prev = rho;
    }
  }
}

TEST(PhaseScan, WorkedCrossing) {
  const auto nu = make_measure({0.5, 0.5});
  const MeasurePair p(make_measure({0.99, 0.01}), make_measure({0.01, 0.99}));
  const auto r = phase_scan(std::log(3.0), nu, p, 1001, 1e-13);
  ASSERT_TRUE(r.t1);
  EXPECT_EQ(r.crossings, 1);
  EXPECT_TRUE(r.monotone);
  EXPECT_NEAR(*r.t1, 0.8331597764568632, 1e-10);
  EXPECT_NEAR(interpolated_affinity(nu, p, *r.t1), 1 / std::sqrt(3.0), 1e-9);
}

TEST(PhaseScan, VerdictFlipsAcrossT1) {
  std::mt19937_64 rng(47);
  const double tol = 1e-6;
  int found = 0;
  for (int i = 0; i < 100; ++i) {
    const auto k = gen::random_alphabet(rng, 2, 5);
    const auto nu = gen::random_measure(rng, k);
    const MeasurePair p(gen::random_measure(rng, k), gen::random_measure(rng, k));
    const double delta = -2 * std::log(p.affinity()) * 0.5;  // threshold between 1 and affinity
    const auto r = phase_scan(delta, nu, p, 64, tol);
    if (!r.t1) continue;
    ++found;
    const auto at = [&](double t) { return classify_tree_action(delta, interpolated_affinity(nu, p, t), false).phase; };
    EXPECT_EQ(at(*r.t1 - 10 * tol), Phase::WeaklyMixing);
    EXPECT_EQ(at(*r.t1 + 10 * tol), Phase::Dissipative);
  }
  EXPECT_GT(found, 50);
}

TEST(PhaseScan, NoCrossing) {
  const auto nu = make_measure({0.5, 0.5});
  const MeasurePair p(make_measure({0.6, 0.4}), make_measure({0.4, 0.6}));
  const auto r = phase_scan(std::log(3.0), nu, p, 64, 1e-12);
  EXPECT_FALSE(r.t1);
  EXPECT_EQ(r.crossings, 0);
  EXPECT_THROW(phase_scan(std::log(3.0), nu, p, 8, 1e-12), Error);
}
