#include <gtest/gtest.h>

#include "bernphase/recurrence.hpp"

using namespace bernphase;

namespace {
RecurrenceOptions threads(unsigned n) {
  RecurrenceOptions o;
  o.threads = n;
  return o;
}
}  // namespace

TEST(Recurrence, WeaklyMixingPairIsRecurrent) {
  const MeasurePair p(make_measure({0.7, 0.3}), make_measure({0.3, 0.7}));
  const auto d = recurrence_diagnostic(TreeSpec::regular(3), p, 10, 60, 0, threads(4));
  EXPECT_EQ(d.verdict, Evidence::RecurrentEvidence);
  EXPECT_GT(d.slope.lower, 0.0);
}

// Affinity 0.6: T_n settles slowly, roughly e^{-0.66} per level.
TEST(Recurrence, DissipativePairConverges) {
  const MeasurePair p(make_measure({0.9, 0.1}), make_measure({0.1, 0.9}));
  const auto d = recurrence_diagnostic(TreeSpec::regular(3), p, 18, 30, 0, threads(8));
  EXPECT_EQ(d.verdict, Evidence::DissipativeEvidence);
  EXPECT_LT(d.max_relative_increment, d.epsilon);
}

TEST(Recurrence, EqualMeasuresCountBallVolume) {
  const MeasurePair p(make_measure({0.4, 0.6}), make_measure({0.4, 0.6}));
  const auto d = recurrence_diagnostic(TreeSpec::regular(3), p, 8, 30, 0, threads(2));
  EXPECT_EQ(d.verdict, Evidence::RecurrentEvidence);
  EXPECT_NEAR(d.mean_log_T[8], std::log(static_cast<double>(ball_size(TreeSpec::regular(3), 8))), 1e-12);
  EXPECT_NEAR(d.slope.estimate, std::log(2.0), 0.01);
}

TEST(Recurrence, ThreadCountInvariant) {
  const MeasurePair p(make_measure({0.8, 0.2}), make_measure({0.2, 0.8}));
  const auto a = recurrence_diagnostic(TreeSpec::cayley(2), p, 6, 40, 3, threads(1));
  const auto b = recurrence_diagnostic(TreeSpec::cayley(2), p, 6, 40, 3, threads(8));
  EXPECT_EQ(a.log_T, b.log_T);
  EXPECT_EQ(a.slope.estimate, b.slope.estimate);
}

TEST(Recurrence, RejectsSmallInputs) {
  const MeasurePair p(make_measure({0.8, 0.2}), make_measure({0.2, 0.8}));
  EXPECT_THROW(recurrence_diagnostic(TreeSpec::regular(3), p, 10, 10, 0), Error);
  EXPECT_THROW(recurrence_diagnostic(TreeSpec::regular(3), p, 3, 30, 0), Error);
  RecurrenceOptions tight;
  tight.vertex_cap = 100;
  try {
    recurrence_diagnostic(TreeSpec::regular(3), p, 10, 30, 0, tight);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DepthBudget);
  }
}

TEST(KsFamily, Values) {
  EXPECT_EQ(ks_family(0.0, 17), 0.5);
  EXPECT_NEAR(ks_family(1.0, 5), 0.9472135954999579, 1e-15);
  EXPECT_EQ(ks_family(1.0, 4), 0.5);
  EXPECT_EQ(ks_family(1.0, -9), 0.5);
}

TEST(Shift, MeasurePreservingIsRecurrent) {
  const auto d = shift_recurrence_diagnostic(0.0, 64, 30, 0, threads(4));
  EXPECT_EQ(d.verdict, Evidence::RecurrentEvidence);
  EXPECT_TRUE(d.truncation_bias);
}

TEST(Shift, SmallTRecurrent) {
  EXPECT_EQ(shift_recurrence_diagnostic(0.05, 256, 100, 0, threads(4)).verdict, Evidence::RecurrentEvidence);
}

TEST(Shift, LargeTDissipative) {
  EXPECT_EQ(shift_recurrence_diagnostic(10.0, 1024, 100, 0, threads(4)).verdict, Evidence::DissipativeEvidence);
}
