#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "srtlab/errors.hpp"
#include "srtlab/srt_diag.hpp"

using namespace srtlab;

namespace {

LatticeLaw pareto(double alpha) {
  return make_pareto_lattice(TailIndexFunction(alpha, SlowlyVarying::constant()), 1.0);
}

}  // namespace

TEST(ConstC, Values) {
  EXPECT_NEAR(const_C(0.5), 1.0 / std::numbers::pi, 1e-15);
  EXPECT_NEAR(const_C(0.3), 0.257518, 1e-6);
  EXPECT_LT(const_C(0.999999), 1e-5);
  EXPECT_THROW(const_C(1.0), ConfigError);
}

TEST(BigJumpParams, Examples) {
  EXPECT_EQ(big_jump_params(0.7).kappa, 0);
  const BigJumpParams p = big_jump_params(0.4);
  EXPECT_EQ(p.kappa, 1);
  EXPECT_NEAR(p.gamma, 0.05, 1e-15);
  EXPECT_NEAR(p.J, -0.7, 1e-14);
  EXPECT_NEAR(big_jump_params(0.5).xi(16.0, 256.0), std::pow(2.0, 7.5), 1e-10);
}

TEST(BigJumpParams, GridProperties) {
  for (int i = 0; i < 97; ++i) {
    const double a = 0.01 + 0.98 * i / 96.0;
    const BigJumpParams p = big_jump_params(a);
    EXPECT_GT(p.J, -1.0) << a;
    EXPECT_GT(p.gamma, 0.0);
    EXPECT_LT(p.gamma, 0.25);
    const int m = p.kappa;
    EXPECT_GT(a, 1.0 / (m + 2)) << a;
    EXPECT_LE(a, 1.0 / (m + 1)) << a;
  }
  EXPECT_EQ(big_jump_params(1.0 / 3.0).kappa, 2);
  EXPECT_EQ(big_jump_params(1.0 / 3.0 + 1e-9).kappa, 1);
}

TEST(SrtRatio, RawArithmetic) {
  EXPECT_NEAR(srt_ratio_raw(0.002, 0.01, 1.0, 0.5), 0.002 / (0.01 / std::numbers::pi), 1e-12);
  EXPECT_NEAR(srt_ratio_raw(0.002, 0.01, 1.0, 0.5), 0.6283, 1e-4);
  EXPECT_EQ(srt_ratio_raw(0.0, 0.01, 1.0, 0.5), 0.0);
}

TEST(SrtRatio, TableLookups) {
  const LatticeLaw F = pareto(0.7);
  const RenewalTable t = renewal_measure_onesided(F, 20000);
  const double x = 20000.0;
  const TailIndexFunction& A = F.A();
  EXPECT_NEAR(srt_ratio(F, t, x), t.at(20000) / (const_C(0.7) * A(x) / x), 1e-12);
  EXPECT_NEAR(srt_ratio(F, t, x), 1.0, 0.1);
  EXPECT_NEAR(integrated_ratio(F, t, x), 1.0, 0.05);
  EXPECT_NEAR(integrated_ratio(F, t, 0.0), t.at(0) * 0.7 / (const_C(0.7) * 0.5), 1e-12);
  EXPECT_THROW(integrated_ratio(F, t, 30000.0), DomainError);
}

TEST(RiemannC, MonotoneApproachAndCollapse) {
  EXPECT_EQ(riemann_C_delta(0.5, 1.0), 0.0);
  const double a = riemann_C_delta(0.5, 0.1);
  const double b = riemann_C_delta(0.5, 0.03);
  const double c = riemann_C_delta(0.5, 0.01);
  EXPECT_LT(a, b);
  EXPECT_LT(b, c);
  EXPECT_LT(c, const_C(0.5));
  EXPECT_NEAR(c / const_C(0.5), 1.0, 0.03);
}

TEST(Lemma41, Examples) {
  const LatticeLaw F = pareto(0.4);
  const double x = std::exp2(14);
  EXPECT_EQ(lemma41_probe(F, 1e-9, x, 2, 0), 0.0);
  for (auto [ell, m] : {std::pair{2, 0}, std::pair{1, 1}}) {
    const double r4 = lemma41_probe(F, 0.4, x, ell, m);
    const double r2 = lemma41_probe(F, 0.2, x, ell, m);
    const double r1 = lemma41_probe(F, 0.1, x, ell, m);
    EXPECT_GT(r4, r2) << ell << m;
    EXPECT_GT(r2, r1) << ell << m;
  }
  // xi >= delta^gamma x > x/2, so two big jumps overshoot x
  EXPECT_EQ(lemma41_probe(F, 0.4, x, 0, 2), 0.0);
  EXPECT_THROW(lemma41_probe(F, 0.4, x, 0, 1), ConfigError);
}

TEST(Lemma41, PartitionReproducesSmallNSum) {
  const LatticeLaw F = pareto(0.7);
  const double x = 4096.0;
  const TailIndexFunction& A = F.A();
  for (double delta : {0.4, 0.1}) {
    double parts = lemma41_probe(F, delta, x, 0, 1);
    const auto N = static_cast<std::int64_t>(std::floor(A(delta * x)));
    double none = 0.0;
    for (std::int64_t n = 1; n <= N; ++n) none += bigjump_decomposition(F, n, x, 0).component[0];
    parts += none * x / A(x);
    EXPECT_NEAR(parts, small_n_sum(F, x, delta), 1e-9);
  }
}

TEST(Lemma42, DecaysInDelta) {
  const LatticeLaw F = pareto(0.4);
  const double x = std::exp2(14);
  EXPECT_EQ(lemma42_probe(F, 1e-9, x, 0), 0.0);
  const std::vector<double> ds{0.4, 0.2, 0.1};
  std::vector<double> v0, v1;
  for (double d : ds) {
    v0.push_back(lemma42_probe(F, d, x, 0));
    v1.push_back(lemma42_probe(F, d, x, 1));
  }
  for (const auto& v : {v0, v1}) {
    EXPECT_GT(v[0], v[1]);
    EXPECT_GT(v[1], v[2]);
  }
  // convex in log delta: the second step drops at least as much as the first
  const double s1 = std::log(v0[0] / v0[1]);
  const double s2 = std::log(v0[1] / v0[2]);
  EXPECT_GE(s2, s1 * 0.999);
}

TEST(Lemma51, ParetoFitHasPositiveRate) {
  const LatticeLaw F = pareto(0.5);
  const double z = 1024.0;
  std::vector<std::int64_t> ns;
  for (int i = 1; i <= 8; ++i) ns.push_back(32 * i);
  const Lemma51Fit fit = lemma51_probe(F, ns, z);
  EXPECT_FALSE(fit.degenerate);
  EXPECT_GT(fit.c, 0.0);
  for (std::size_t i = 0; i < ns.size(); ++i)
    EXPECT_LE(fit.scaled[i], fit.C * std::exp(-fit.c * static_cast<double>(ns[i]) / 32.0) * (1.0 + 1e-12));
}

TEST(Necessity, ParetoSeriesVanishes) {
  const LatticeLaw F = pareto(0.5);
  std::vector<double> xs;
  for (int e = 12; e <= 20; ++e) xs.push_back(std::exp2(e));
  const NecessityReport r = necessity_probe(F, xs, 1.0, 2);
  ASSERT_EQ(r.series.size(), 2u);
  for (std::size_t j = 1; j < xs.size(); ++j) EXPECT_LT(r.series[0][j], r.series[0][j - 1]);
  EXPECT_EQ(r.trend[0], Trend::vanishing);
  EXPECT_THROW(necessity_probe(F, xs, 0.5, 1), ConfigError);
}

TEST(Necessity, UaoSpikes) {
  const UaoSpec spec = uao_preset_spec(0.5, 30);
  const UaoLaw U = make_uao_family(spec);
  const double z = spec.z_seq[U.selected[3]];
  const std::vector<double> xs{z - 2.0, z, z + 2.0};
  const NecessityReport r = necessity_probe(U.law, xs, 1.0, 1);
  EXPECT_GT(r.series[0][1], 10.0 * r.series[0][0]);
  EXPECT_GT(r.series[0][1], 10.0 * r.series[0][2]);
}
