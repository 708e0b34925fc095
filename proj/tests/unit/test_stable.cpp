#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <gtest/gtest.h>

#include "srtlab/stable.hpp"

using namespace srtlab;

namespace {

double levy(double x) { return 0.5 * std::pow(x, -1.5) * std::exp(-std::numbers::pi / (4.0 * x)); }

double mass(const StableDensity& phi) {
  boost::math::quadrature::exp_sinh<double> q;
  return q.integrate([&](double x) { return phi(x); }, 0.0, std::numeric_limits<double>::infinity());
}

}  // namespace

TEST(StableDensity, LevyClosedForm) {
  const StableDensity phi(0.5);
  EXPECT_NEAR(phi(1.0), 0.22797, 5e-6);
  for (double x = 0.1; x <= 50.0; x *= 1.09) EXPECT_NEAR(phi(x) / levy(x), 1.0, 1e-6) << x;
}

TEST(StableDensity, BothRepresentationsAgreeAcrossCrossover) {
  for (double a : {0.3, 0.5, 0.7}) {
    const StableDensity phi(a);
    const double c = phi.crossover();
    for (double x : {0.8 * c, c, 1.25 * c}) {
      const double s = phi.series(x);
      const double i = phi.integral(x);
      if (std::isfinite(s)) EXPECT_NEAR(s, i, 1e-8 * std::max(1.0, i)) << a << " " << x;
    }
  }
}

TEST(StableDensity, NormalizedAndNonnegative) {
  for (double a : {0.3, 0.5, 0.7}) {
    const StableDensity phi(a);
    EXPECT_NEAR(mass(phi), 1.0, 1e-6) << a;
    for (double x = 1e-3; x <= 1e4; x *= 1.2) EXPECT_GE(phi(x), 0.0);
  }
}

TEST(StableDensity, VanishesAtOrigin) {
  const StableDensity phi(0.3);
  EXPECT_LT(phi(1e-6), 1e-12);
  EXPECT_LT(phi(1e-6), phi(1e-4));
  EXPECT_EQ(phi(0.0), 0.0);
  EXPECT_EQ(phi(-1.0), 0.0);
}

TEST(StableDensity, RightTail) {
  for (double a : {0.3, 0.5, 0.7}) {
    const StableDensity phi(a);
    EXPECT_NEAR(phi(1e8) / (a * std::pow(1e8, -a - 1.0)), 1.0, 0.02) << a;
    EXPECT_NEAR(phi.survival(1e8) * std::pow(1e8, a), 1.0, 0.02) << a;
  }
}

TEST(StableDensity, CfInversionMatchesOneSided) {
  const StableDensity phi(0.5);
  for (double x : {0.3, 1.0, 4.0}) EXPECT_NEAR(phi.cf_inversion(x), levy(x), 1e-7);
}

TEST(StableDensity, TwoSidedIsNormalizedAndSymmetric) {
  const StableDensity phi(0.5, 1.0, 1.0);
  for (double x : {0.5, 2.0, 10.0}) EXPECT_NEAR(phi(x), phi(-x), 1e-9);
  EXPECT_GT(phi(0.0), 0.0);
  EXPECT_GT(phi.sup(), 0.0);
}

TEST(StableDensity, SupAndArgmax) {
  const StableDensity phi(0.5);
  EXPECT_NEAR(phi.argmax(), std::numbers::pi / 6.0, 1e-6);
  EXPECT_NEAR(phi.sup(), levy(std::numbers::pi / 6.0), 1e-12);
}

TEST(StableTable, InterpolatesSmoothly) {
  const StableDensity phi(0.5);
  const StableTable t(phi, 0.0, 20.0, 1 << 14);
  for (double y : {0.05, 0.5, 1.7, 9.99}) EXPECT_NEAR(t(y), phi(y), 1e-8);
  EXPECT_EQ(t(25.0), 0.0);
}

TEST(Llt, DecreasesAlongDyadicN) {
  const LatticeLaw F = make_pareto_lattice(TailIndexFunction(0.5, SlowlyVarying::constant()), 16.0);
  const std::vector<int> es{4, 6, 8};
  const std::vector<LltReport> r = llt_error_dyadic(F, es);
  ASSERT_EQ(r.size(), 3u);
  EXPECT_GT(r[0].statistic, r[1].statistic);
  EXPECT_GT(r[1].statistic, r[2].statistic);
  const LltReport single = llt_error(F, 256);
  EXPECT_NEAR(single.statistic, r[2].statistic, 1e-3 * single.sup_phi);
}

TEST(LltTruncated, Examples) {
  const LatticeLaw F = make_pareto_lattice(TailIndexFunction(0.4, SlowlyVarying::constant()), 1.0);
  const std::int64_t n = 1 << 8;
  const double an = F.A().inverse(static_cast<double>(n));
  EXPECT_EQ(llt_truncated_lower(F, n, 0.5 / an, KRegion::positive), 0.0);
  const double wide = llt_truncated_lower(F, n, 1e6, KRegion::positive);
  const double eight = llt_truncated_lower(F, n, 8.0, KRegion::positive);
  EXPECT_GT(wide, 0.0);
  EXPECT_NEAR(eight / wide, 1.0, 0.25);
  const double binding = llt_truncated_lower(F, n, 1.5, KRegion::positive);
  EXPECT_GT(binding, 0.0);
  EXPECT_LT(binding, wide);
  EXPECT_EQ(default_region(F), KRegion::positive);
}
