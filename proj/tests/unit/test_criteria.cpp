#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "srtlab/criteria.hpp"
#include "srtlab/errors.hpp"

using namespace srtlab;

namespace {

TailIndexFunction power(double alpha) { return TailIndexFunction(alpha, SlowlyVarying::constant()); }

LatticeLaw pareto(double alpha) { return make_pareto_lattice(power(alpha), 1.0); }

// Pareto law scaled by 1 - (total atom mass) plus point masses; the tail window sits far above the atoms.
LatticeLaw spiked(double alpha, const std::vector<std::pair<std::int64_t, double>>& atoms) {
  const TailIndexFunction A = power(alpha);
  double m = 0.0;
  for (const auto& a : atoms) m += a.second;
  const LatticeLaw base = pareto(alpha);
  std::vector<double> table(base.table().begin(), base.table().end());
  for (double& v : table) v *= 1.0 - m;
  LatticeLaw::Builder b(1.0);
  b.table(0, std::move(table))
      .right_tail(1.0 - m, std::make_shared<ParetoTail>(A, 1.0))
      .tail_index(A)
      .tail_constants(1.0 - m, 0.0)
      .tail_window(TailWindow{1e6, 1e8, 4});
  for (const auto& [k, v] : atoms) b.atom(k, v);
  return b.build();
}

CriterionGrid synthetic(const std::function<double(double, double)>& q) {
  CriterionGrid g;
  g.eta = default_eta_list();
  g.x = default_x_list();
  for (double eta : g.eta) {
    std::vector<double> row;
    for (double x : g.x) row.push_back(q(eta, x));
    g.Q.push_back(row);
  }
  return g;
}

}  // namespace

TEST(RFunc, Examples) {
  const LatticeLaw F = pareto(0.5);
  EXPECT_EQ(r_func(F, 1.0), 0.0);
  EXPECT_NEAR(r_func(F, 4.0), 4.0 * (1.0 / std::sqrt(3.0) - 0.5) / 0.5, 1e-12);
  EXPECT_NEAR(r_func(F, 4.0), 0.6188, 1e-4);
  EXPECT_NEAR(r_func(F, 1e6), 0.5, 1e-5);
  EXPECT_NEAR(r_func(pareto(0.3), 1e7), 0.3, 1e-5);
}

TEST(RT, Examples) {
  const LatticeLaw F = pareto(0.5);
  EXPECT_EQ(R_T(F, 3.0, 3.0, 0.0), 0.0);
  EXPECT_NEAR(R_T(F, 3.0, 5.0, 0.0), r_func(F, 4.0) + r_func(F, 5.0), 1e-14);
  const DoneySup d = doney_sup(F, 1e4);
  EXPECT_EQ(R_T(F, 2.0, 1e4, d.sup), 0.0);
  EXPECT_NEAR(R_T(F, 3.5, 4.25, 0.1), 0.5 * (r_func(F, 4.0) - 0.1) + 0.25 * (r_func(F, 5.0) - 0.1), 1e-14);
}

TEST(Doney, ParetoFiniteUaoGrowing) {
  const DoneySup d = doney_sup(pareto(0.5), std::exp2(20));
  EXPECT_GT(d.sup, 0.0);
  EXPECT_LT(d.sup, 1.0);
  EXPECT_LT(d.argmax, 64.0);

  const UaoSpec spec = uao_preset_spec(0.5, 30);
  const UaoLaw U = make_uao_family(spec);
  double prev = 0.0;
  for (std::size_t j = 1; j < U.selected.size(); ++j) {
    const double z = spec.z_seq[U.selected[j]];
    if (z > std::exp2(24)) break;
    const double s = doney_sup(U.law, z).sup;
    EXPECT_GT(s, prev);
    prev = s;
  }
}

TEST(ChiU, Examples) {
  EXPECT_NEAR(chi_u(power(0.5), std::numbers::e), 1.0, 1e-12);
  EXPECT_EQ(chi_u(power(0.5), 1.0), 0.0);
  const double limit = (1.0 - std::pow(1e8, -0.2)) / 0.2;
  EXPECT_NEAR(chi_u(power(0.4), 1e8) / limit, 1.0, 1e-10);
  const TailIndexFunction L(0.5, SlowlyVarying::log_power(1.0));
  long double mid = 0.0L;
  const int n = 200000;
  const double step = std::log(1e4) / n;
  for (int i = 0; i < n; ++i) {
    const double s = std::exp((i + 0.5) * step);
    mid += static_cast<long double>(L(s) * L(s) / s) * step;
  }
  EXPECT_NEAR(chi_u(L, 1e4) / static_cast<double>(mid), 1.0, 1e-8);
}

TEST(ChiDiag, Examples) {
  const LatticeLaw F = pareto(0.4);
  const double x = std::exp2(16);
  EXPECT_LT(chi_diag(F, 0.1, x, 1.0), 1e-3);
  const DoneySup d = doney_sup(F, x);
  EXPECT_EQ(chi_diag(F, 0.1, x, d.sup), 0.0);
  EXPECT_THROW(chi_diag(F, 1.5, x, 1.0), ConfigError);
}

TEST(ChiDiag, SpikeEntersWindow) {
  const LatticeLaw F = spiked(0.4, {{5000, 0.01}});
  const double before = chi_diag(F, 0.1, 4900.0, 1.0);
  const double after = chi_diag(F, 0.1, 5000.0, 1.0);
  EXPECT_GT(after, 100.0 * std::max(before, 1e-12));
}

TEST(NsDensity, ParetoBoundedAndMonotoneInEta) {
  const LatticeLaw F = pareto(0.4);
  const double x = std::exp2(16);
  const double v = ns_diag_density(F, 0.1, x);
  EXPECT_LT(v, 1.0);
  EXPECT_GT(v, 0.0);
  EXPECT_LT(ns_diag_density(F, 0.05, x), v);
  EXPECT_LT(v, ns_diag_density(F, 0.2, x));
}

TEST(NsDensity, SingleSpikeAndAdditivity) {
  const double alpha = 0.4, x = 10000.0, eta = 0.1;
  const TailIndexFunction A = power(alpha);
  const double base = ns_diag_density(pareto(alpha), eta, x);
  const double m1 = 0.01, m2 = 0.02;
  const double s1 = 37.0, s2 = 512.0;
  const auto term = [&](double s, double m) { return x / A(x) * A(s) * A(s) / s * m; };
  const LatticeLaw one = spiked(alpha, {{static_cast<std::int64_t>(x - s1), m1}});
  EXPECT_NEAR(ns_diag_density(one, eta, x), (1.0 - m1) * base + term(s1, m1), 1e-12);
  const LatticeLaw two = spiked(alpha, {{static_cast<std::int64_t>(x - s1), m1}, {static_cast<std::int64_t>(x - s2), m2}});
  EXPECT_NEAR(ns_diag_density(two, eta, x), (1.0 - m1 - m2) * base + term(s1, m1) + term(s2, m2), 1e-12);
}

TEST(NsDensity, EmptyRangeIsZero) {
  const LatticeLaw F = pareto(0.4);
  EXPECT_EQ(ns_diag_density(F, 0.1, 5.0), 0.0);
  EXPECT_EQ(ns_diag_interval(F, 0.1, 5.0), 0.0);
}

TEST(NsInterval, SingleSpikeClosedForm) {
  const double alpha = 0.4, x = 10000.0, eta = 0.1, m = 0.01, s0 = 200.0;
  const TailIndexFunction A = power(alpha);
  const double base = ns_diag_interval(pareto(alpha), eta, x);
  const LatticeLaw F = spiked(alpha, {{static_cast<std::int64_t>(x - s0), m}});
  const double integral = (std::pow(eta * x, 2.0 * alpha - 1.0) - std::pow(s0, 2.0 * alpha - 1.0)) / (2.0 * alpha - 1.0);
  EXPECT_NEAR(ns_diag_interval(F, eta, x), (1.0 - m) * base + x / A(x) * m * integral, 1e-11);
}

TEST(NsInterval, AgreesWithDensityLabelForPareto) {
  const LatticeLaw F = pareto(0.4);
  std::vector<double> xs;
  for (int e = 12; e <= 18; ++e) xs.push_back(std::exp2(e));
  const std::vector<double> etas = default_eta_list();
  const CriterionGrid d = evaluate_grid(F, CriterionKind::ns_density, etas, xs);
  const CriterionGrid i = evaluate_grid(F, CriterionKind::ns_interval, etas, xs);
  EXPECT_NE(d.trend, Trend::growing);
  EXPECT_EQ(d.trend, i.trend);
}

TEST(NsTwosided, OneSidedLawDelegates) {
  const LatticeLaw F = pareto(0.4);
  for (double x : {4096.0, 65536.0}) EXPECT_EQ(ns_diag_twosided(F, 0.1, x), ns_diag_density(F, 0.1, x));
}

TEST(NsTwosided, CounterexampleGrowsOneSidedPartDoesNot) {
  const CounterexampleLaw C = make_twosided_counterexample(0.25);
  const double a = ns_diag_twosided(C.law, 0.1, std::exp2(12));
  const double b = ns_diag_twosided(C.law, 0.1, std::exp2(16));
  const double c = ns_diag_twosided(C.law, 0.1, std::exp2(20));
  EXPECT_LT(a, b);
  EXPECT_LT(b, c);
  std::vector<double> xs;
  for (int e = 12; e <= 20; e += 2) xs.push_back(std::exp2(e));
  const std::vector<double> etas = default_eta_list();
  EXPECT_EQ(evaluate_grid(C.law, CriterionKind::ns_twosided, etas, xs).trend, Trend::growing);
  EXPECT_NE(evaluate_grid(C.law, CriterionKind::ns_density, etas, xs).trend, Trend::growing);
}

TEST(HalfCondition, Examples) {
  const HalfConditionReport flat = half_condition(power(0.5), std::exp2(30));
  for (double r : flat.ratio) EXPECT_DOUBLE_EQ(r, 1.0);
  EXPECT_TRUE(flat.holds_on_range);
  const HalfConditionReport inc = half_condition(TailIndexFunction(0.5, SlowlyVarying::log_power(2.0)), std::exp2(30));
  for (double r : inc.ratio) EXPECT_NEAR(r, 1.0, 1e-12);
  const HalfConditionReport rec = half_condition(TailIndexFunction(0.5, SlowlyVarying::reciprocal_log()), std::exp2(40));
  for (std::size_t i = 0; i < rec.x.size(); ++i)
    EXPECT_NEAR(rec.ratio[i] / (std::log1p(rec.x[i]) / std::numbers::ln2), 1.0, 1e-10);
  EXPECT_FALSE(rec.holds_on_range);
  EXPECT_EQ(rec.growth, Trend::growing);
  EXPECT_THROW(half_condition(power(0.4), 100.0), ConfigError);
}

TEST(Smoothness, ParetoExponentNearOne) {
  const LatticeLaw F = pareto(0.4);
  std::vector<double> xs;
  for (int e = 10; e <= 16; ++e) xs.push_back(std::exp2(e));
  const SmoothnessReport r = smoothness_exponent(F, xs, 0.5);
  EXPECT_NEAR(r.fitted_exponent, 1.0, 0.05);
  EXPECT_TRUE(r.certified);
  EXPECT_TRUE(r.anchor_ok);
  EXPECT_FALSE(r.residual_flag);
  EXPECT_THROW(smoothness_exponent(pareto(0.7), xs, 0.1), ConfigError);
}

TEST(Smoothness, SpikesBreakTheFit) {
  const UaoSpec spec = uao_preset_spec(0.5, 30);
  const UaoLaw U = make_uao_family(spec);
  std::vector<double> xs;
  for (std::size_t j = 0; j < U.selected.size(); ++j) {
    const double z = spec.z_seq[U.selected[j]];
    if (z > 64.0 && z < std::exp2(20)) xs.push_back(z - 1.0);
  }
  ASSERT_GE(xs.size(), 3u);
  const SmoothnessReport r = smoothness_exponent(U.law, xs, 0.1);
  EXPECT_FALSE(r.certified && !r.residual_flag);
}

TEST(ClassifyTrend, ContractExamples) {
  EXPECT_EQ(classify_trend(synthetic([](double, double) { return 0.0; })), Trend::vanishing);
  EXPECT_EQ(classify_trend(synthetic([](double, double x) { return std::sqrt(std::log(x)); })), Trend::growing);
  EXPECT_EQ(classify_trend(synthetic([](double eta, double) { return std::pow(eta, 0.8); })), Trend::vanishing);
  EXPECT_EQ(classify_trend(synthetic([](double eta, double) { return 1.0 + 0.1 * eta; })), Trend::bounded);
}

TEST(ClassifyTrend, GrowthMustHoldInEveryRow) {
  const CriterionGrid g = synthetic([](double eta, double x) {
    return eta < 0.07 ? std::pow(eta, 0.8) * std::sqrt(std::log(x)) : std::pow(eta, 0.8);
  });
  EXPECT_EQ(classify_trend(g), Trend::inconclusive);
  const CriterionGrid all = synthetic([](double eta, double x) { return std::pow(eta, 0.8) * std::log(x); });
  EXPECT_EQ(classify_trend(all), Trend::growing);
}

TEST(ClassifyTrend, SingleRow) {
  CriterionGrid g;
  g.eta = {1.0};
  g.x = default_x_list();
  std::vector<double> down, flat;
  for (double x : g.x) {
    down.push_back(1.0 / std::log(x));
    flat.push_back(2.0);
  }
  g.Q = {down};
  EXPECT_EQ(classify_trend(g), Trend::vanishing);
  g.Q = {flat};
  EXPECT_EQ(classify_trend(g), Trend::bounded);
}

TEST(EvaluateGrid, DeterministicAcrossThreadCounts) {
  const LatticeLaw F = pareto(0.5);
  std::vector<double> xs;
  for (int e = 12; e <= 16; ++e) xs.push_back(std::exp2(e));
  const std::vector<double> etas = default_eta_list();
  GridOptions one;
  one.threads = 1;
  GridOptions four;
  four.threads = 4;
  for (CriterionKind k : {CriterionKind::doney, CriterionKind::chi, CriterionKind::ns_density,
                          CriterionKind::ns_interval, CriterionKind::ns_twosided}) {
    const CriterionGrid a = evaluate_grid(F, k, etas, xs, one);
    const CriterionGrid b = evaluate_grid(F, k, etas, xs, four);
    EXPECT_EQ(a.Q, b.Q) << to_string(k);
    EXPECT_EQ(a.trend, b.trend);
    for (const auto& row : a.Q)
      for (double v : row) EXPECT_GE(v, 0.0);
    EXPECT_EQ(criterion_kind_from_string(to_string(k)), k);
  }
}

TEST(EvaluateGrid, CutoffLabelsAgree) {
  const LatticeLaw F = pareto(0.4);
  std::vector<double> xs;
  for (int e = 12; e <= 16; ++e) xs.push_back(std::exp2(e));
  const std::vector<double> etas = default_eta_list();
  GridOptions t0;
  t0.T = 0.0;
  GridOptions t1;
  t1.T = 0.2;
  const CriterionGrid a = evaluate_grid(F, CriterionKind::chi, etas, xs, t0);
  const CriterionGrid b = evaluate_grid(F, CriterionKind::chi, etas, xs, t1);
  EXPECT_EQ(a.trend, b.trend);
  for (std::size_t i = 0; i < etas.size(); ++i)
    for (std::size_t j = 0; j < xs.size(); ++j) EXPECT_GE(a.Q[i][j], b.Q[i][j]);
}
