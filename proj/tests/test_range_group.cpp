#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "bernphase/range_group.hpp"

using namespace bernphase;

TEST(RangeGroup, EqualMeasuresTrivial) {
  const MeasurePair p(make_measure({0.3, 0.7}), make_measure({0.3, 0.7}));
  const auto r = essential_range_group(p);
  EXPECT_EQ(r.kind, RangeGroupKind::Trivial);
  EXPECT_FALSE(r.generator);
}

TEST(RangeGroup, LatticeTwoLogTwo) {
  const MeasurePair p(make_measure({1.0 / 3, 2.0 / 3}), make_measure({2.0 / 3, 1.0 / 3}));
  const auto r = essential_range_group(p);
  ASSERT_EQ(r.kind, RangeGroupKind::Lattice);
  EXPECT_NEAR(*r.generator, 1.3862943611198906, 1e-12);
  EXPECT_FALSE(r.heuristic);
}

TEST(RangeGroup, DenseThreeSymbols) {
  const MeasurePair p(make_measure({0.5, 0.3, 0.2}), make_measure({0.2, 0.5, 0.3}));
  const auto r = essential_range_group(p);
  EXPECT_EQ(r.kind, RangeGroupKind::Dense);
  EXPECT_TRUE(r.heuristic);
}

TEST(RangeGroup, ExtraGeneratorCanBreakLattice) {
  const MeasurePair p(make_measure({1.0 / 3, 2.0 / 3}), make_measure({2.0 / 3, 1.0 / 3}));
  const std::vector<double> gens{std::log(3.0)};
  EXPECT_EQ(essential_range_group(p, gens).kind, RangeGroupKind::Dense);
  const std::vector<double> commensurable{std::log(16.0)};
  const auto r = essential_range_group(p, commensurable);
  ASSERT_EQ(r.kind, RangeGroupKind::Lattice);
  EXPECT_NEAR(*r.generator, 2 * std::log(2.0), 1e-12);
}

// Build pairs whose log-ratios are integer multiples of a chosen a, then check
// the generator is recovered.
TEST(RangeGroup, RecoversPlantedLattice) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ua(0.05, 0.8);
  std::uniform_int_distribution<int> uk(-3, 3);
  int checked = 0;
  for (int trial = 0; trial < 200 && checked < 50; ++trial) {
    const double a = ua(rng);
    // mu1_i proportional to w_i, mu0_i proportional to w_i exp(k_i a).
    const int k0 = uk(rng), k1 = uk(rng), k2 = uk(rng);
    if (std::gcd(std::gcd(std::abs(k0 - k1), std::abs(k1 - k2)), std::abs(k0 - k2)) != 1) continue;
    const std::vector<double> w{0.2, 0.3, 0.5};
    std::vector<double> m0{w[0] * std::exp(k0 * a), w[1] * std::exp(k1 * a), w[2] * std::exp(k2 * a)};
    double s = m0[0] + m0[1] + m0[2];
    for (auto& x : m0) x /= s;
    const MeasurePair p(make_measure(m0), make_measure(w));
    const auto r = essential_range_group(p);
    ASSERT_EQ(r.kind, RangeGroupKind::Lattice) << "a=" << a;
    EXPECT_NEAR(*r.generator, a, 1e-9 * a);
    ++checked;
  }
  EXPECT_GE(checked, 20);
}

TEST(RangeGroupDetail, RealGcd) {
  EXPECT_NEAR(detail::real_gcd(6 * 0.3, 4 * 0.3, 1e-9), 0.6, 1e-12);
}
