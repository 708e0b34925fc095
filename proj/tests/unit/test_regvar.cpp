#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "srtlab/errors.hpp"
#include "srtlab/regvar.hpp"

using namespace srtlab;

namespace {

TailIndexFunction power(double alpha) { return TailIndexFunction(alpha, SlowlyVarying::constant()); }

}  // namespace

TEST(EvalA, Anchors) {
  const TailIndexFunction A = power(0.5);
  EXPECT_DOUBLE_EQ(eval_A(A, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(eval_A(A, 0.0), 0.5);
  EXPECT_NEAR(eval_A(A, 1e4), 100.0, 1e-10);
}

TEST(EvalA, AnchorsHoldForEveryKind) {
  for (const SlowlyVarying& L : {SlowlyVarying::log_power(1.0), SlowlyVarying::log_power(-0.5),
                                 SlowlyVarying::reciprocal_log(), SlowlyVarying::constant(3.0)}) {
    const TailIndexFunction A(0.4, L);
    EXPECT_NEAR(A(0.0), 0.5, 1e-14);
    EXPECT_NEAR(A(1.0), 1.0, 1e-14);
  }
}

TEST(EvalA, StrictlyIncreasing) {
  for (const SlowlyVarying& L : {SlowlyVarying::constant(), SlowlyVarying::log_power(2.0),
                                 SlowlyVarying::reciprocal_log()}) {
    const TailIndexFunction A(0.5, L);
    double prev = A(0.0);
    for (int i = 1; i <= 400; ++i) {
      const double x = std::pow(10.0, -2.0 + i * 0.025);
      const double v = A(x);
      EXPECT_GT(v, prev) << to_string(L.kind()) << " at " << x;
      prev = v;
    }
  }
}

TEST(InverseA, ClosedForms) {
  EXPECT_NEAR(inverse_A(power(0.5), 1.0), 1.0, 1e-12);
  EXPECT_NEAR(inverse_A(power(0.5), 100.0), 1e4, 1e-6);
  EXPECT_NEAR(inverse_A(power(0.25), 10.0), 1e4, 1e-6);
}

TEST(InverseA, RoundTrip) {
  for (const SlowlyVarying& L : {SlowlyVarying::constant(), SlowlyVarying::log_power(1.0),
                                 SlowlyVarying::reciprocal_log()}) {
    const TailIndexFunction A(0.7, L);
    for (double y = 1.0; y <= 1e8; y *= 3.7) EXPECT_NEAR(A(A.inverse(y)) / y, 1.0, 1e-10);
    for (double x = 1.0; x <= 1e8; x *= 5.3) EXPECT_NEAR(A.inverse(A(x)) / x, 1.0, 1e-8);
  }
}

TEST(InverseA, RejectsBelowHalf) { EXPECT_THROW(inverse_A(power(0.5), 0.25), DomainError); }

TEST(Slope, MatchesAlphaForPurePower) {
  const TailIndexFunction A = power(0.6);
  for (double s = 1e3; s <= 1e7; s *= 10.0) {
    const double d = 1e-4 * s;
    const double fd = (A(s + d) - A(s - d)) / (2.0 * d);
    EXPECT_NEAR(fd * s / (0.6 * A(s)), 1.0, 0.05);
  }
}

TEST(Slope, LogKindsMatchAnalyticElasticity) {
  const TailIndexFunction A(0.5, SlowlyVarying::log_power(1.0));
  for (double s = 1e3; s <= 1e7; s *= 10.0) {
    const double d = 1e-4 * s;
    const double fd = (A(s + d) - A(s - d)) / (2.0 * d);
    EXPECT_NEAR(fd * s / A(s), A.elasticity(s), 1e-5);
  }
}

TEST(Lstar, Examples) {
  const TailIndexFunction inc(0.5, SlowlyVarying::log_power(1.0));
  EXPECT_NEAR(eval_Lstar(inc, 100.0), std::log(101.0), 1e-12);
  const TailIndexFunction dec(0.5, SlowlyVarying::reciprocal_log());
  EXPECT_NEAR(eval_Lstar(dec, 100.0), 1.0 / std::numbers::ln2, 1e-12);
  const TailIndexFunction flat(0.5, SlowlyVarying::constant(2.5));
  EXPECT_DOUBLE_EQ(eval_Lstar(flat, 1e6), 2.5);
}

TEST(Lstar, CacheIsMonotoneAndDominatesL) {
  const std::vector<double> tx{1.0, 10.0, 100.0, 1000.0, 1e4};
  const std::vector<double> tv{1.0, 1.2, 0.9, 1.1, 1.0};
  const SlowlyVarying L = SlowlyVarying::tabulated(tx, tv);
  const LStarCache cache(L, 1e5);
  double prev = 0.0;
  for (double x = 1.0; x <= 1e5; x *= 1.07) {
    const double v = cache(x);
    EXPECT_GE(v, prev);
    EXPECT_GE(v, L(x) * (1.0 - 1e-12));
    prev = v;
  }
  EXPECT_NEAR(cache(1e5), 1.2, 1e-12);
}

TEST(Tabulated, RejectsRoughTables) {
  EXPECT_THROW(SlowlyVarying::tabulated({1.0, 2.0}, {1.0, 3.0}), ConfigError);
}

TEST(Potter, Examples) {
  const TailIndexFunction A = power(0.5);
  const PotterReport id = potter_check(A, 1.0, 1e3, 0.1);
  EXPECT_DOUBLE_EQ(id.ratio, 1.0);
  EXPECT_TRUE(id.lower_ok && id.upper_ok);
  EXPECT_NEAR(potter_check(A, 0.25, 1e4, 0.1).ratio, 0.5, 1e-12);
  const PotterReport lg = potter_check(TailIndexFunction(0.5, SlowlyVarying::log_power(1.0)), 0.1, 1e6, 0.1);
  EXPECT_TRUE(lg.lower_ok);
  EXPECT_TRUE(lg.upper_ok);
}

TEST(Potter, RejectsRhoXBelowOne) { EXPECT_THROW(potter_check(power(0.5), 0.1, 5.0, 0.1), DomainError); }

TEST(Karamata, Examples) {
  const SlowlyVarying one = SlowlyVarying::constant();
  EXPECT_NEAR(karamata_partial_sum_check(0.0, one, 1000), 1.0, 2e-3);
  EXPECT_NEAR(karamata_partial_sum_check(1.0, one, 1000), 1.001, 1e-12);
  EXPECT_NEAR(karamata_partial_sum_check(-0.5, one, 1000000), 1.0, 0.01);
}

TEST(Karamata, RejectsZetaAtMinusOne) {
  EXPECT_THROW(karamata_partial_sum_check(-1.0, SlowlyVarying::constant(), 100), DomainError);
}

TEST(Serialization, RoundTripAndStableHash) {
  const TailIndexFunction A(0.35, SlowlyVarying::log_power(-0.75));
  const TailIndexFunction B = TailIndexFunction::deserialize(A.serialize());
  EXPECT_EQ(A, B);
  EXPECT_EQ(A.content_hash(), B.content_hash());
  EXPECT_NE(A.content_hash(), power(0.35).content_hash());
}
