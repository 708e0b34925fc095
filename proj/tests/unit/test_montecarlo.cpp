#include <cmath>

#include <gtest/gtest.h>

#include "srtlab/montecarlo.hpp"
#include "srtlab/renewal.hpp"

using namespace srtlab;

namespace {

LatticeLaw pareto(double alpha) {
  return make_pareto_lattice(TailIndexFunction(alpha, SlowlyVarying::constant()), 1.0);
}

}  // namespace

TEST(CounterRng, StreamsAreReproducibleAndDistinct) {
  CounterRng a(42, 3), b(42, 3), c(42, 4);
  for (int i = 0; i < 100; ++i) {
    const std::uint64_t va = a.next();
    EXPECT_EQ(va, b.next());
    EXPECT_NE(va, c.next());
  }
  CounterRng u(1, 0);
  for (int i = 0; i < 100000; ++i) {
    const double v = u.uniform();
    ASSERT_GT(v, 0.0);
    ASSERT_LT(v, 1.0);
  }
}

TEST(Sampler, DeterministicLaw) {
  const LatticeLaw F = law_from_pmf(1.0, 0, {0.0, 0.0, 0.0, 1.0});
  const IncrementSampler s(F);
  CounterRng rng(5, 0);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(sample_increment(s, rng), 3);
}

TEST(Sampler, TwoPointFrequency) {
  const LatticeLaw F = law_from_pmf(1.0, 0, {0.0, 0.5, 0.5});
  const IncrementSampler s(F);
  CounterRng rng(9, 0);
  const int N = 100000;
  int ones = 0;
  for (int i = 0; i < N; ++i) ones += sample_increment(s, rng) == 1;
  EXPECT_NEAR(ones / static_cast<double>(N), 0.5, 3.0 * std::sqrt(0.25 / N));
}

TEST(Sampler, ParetoTailBeyondTable) {
  const LatticeLaw F = pareto(0.5);
  const IncrementSampler s(F);
  CounterRng rng(17, 0);
  const int N = 1000000;
  int above = 0, far = 0;
  for (int i = 0; i < N; ++i) {
    const std::int64_t k = s.sample(rng);
    above += k > 1000;
    far += k > 1000000;
  }
  const double p = F.survival(1000);
  EXPECT_NEAR(above / static_cast<double>(N), p, 3.0 * std::sqrt(p * (1 - p) / N));
  const double q = F.survival(1000000);
  EXPECT_NEAR(far / static_cast<double>(N), q, 3.0 * std::sqrt(q * (1 - q) / N) + 1.0 / N);
}

TEST(Sampler, TwoSidedLeftTail) {
  const CounterexampleLaw C = make_twosided_counterexample(0.25);
  const IncrementSampler s(C.law);
  CounterRng rng(23, 0);
  const int N = 400000;
  int left = 0;
  for (int i = 0; i < N; ++i) left += s.sample(rng) < -100000;
  const double p = C.law.cdf(-100001);
  EXPECT_NEAR(left / static_cast<double>(N), p, 3.0 * std::sqrt(p * (1 - p) / N));
}

TEST(McRenewal, Examples) {
  const LatticeLaw det = law_from_pmf(1.0, 0, {0.0, 1.0});
  const McEstimate d = mc_renewal_estimate(det, 20.0, 1.0, 5000, 1);
  EXPECT_DOUBLE_EQ(d.estimate, 1.0);
  EXPECT_DOUBLE_EQ(d.stderr_, 0.0);

  const LatticeLaw two = law_from_pmf(1.0, 0, {0.0, 0.5, 0.5});
  const std::vector<double> u = renewal_recursion(std::vector<double>{0.0, 0.5, 0.5}, 50);
  const McEstimate e = mc_renewal_estimate(two, 50.0, 1.0, 200000, 2);
  EXPECT_TRUE(e.covers(u[50])) << e.estimate << " +- " << e.stderr_ << " vs " << u[50];
  EXPECT_GE(e.batches, 16);

  const LatticeLaw F = pareto(0.5);
  const RenewalTable t = renewal_measure_onesided(F, 4096);
  const McEstimate p = mc_renewal_estimate(F, 4096.0, 1.0, 200000, 3);
  EXPECT_TRUE(p.covers(t.at(4096))) << p.estimate << " +- " << p.stderr_ << " vs " << t.at(4096);
}

TEST(McRenewal, DeterministicAcrossThreads) {
  const LatticeLaw F = pareto(0.7);
  McOptions one;
  one.threads = 1;
  McOptions many;
  many.threads = 4;
  const McEstimate a = mc_renewal_estimate(F, 1000.0, 10.0, 50000, 99, one);
  const McEstimate b = mc_renewal_estimate(F, 1000.0, 10.0, 50000, 99, many);
  EXPECT_EQ(a.estimate, b.estimate);
  EXPECT_EQ(a.stderr_, b.stderr_);
}

TEST(McEvent, Examples) {
  std::vector<double> f(11, 0.0);
  f[1] = 0.5;
  f[10] = 0.5;
  const LatticeLaw F = law_from_pmf(1.0, 0, f);
  const McEstimate none = mc_event_probability(F, 2, 1.0, -1, 5.0, 20000, 4);
  EXPECT_TRUE(none.zero_hits);
  EXPECT_EQ(none.estimate, 0.0);
  EXPECT_NEAR(none.upper_bound, 1.0 - std::pow(0.05, 1.0 / 20000), 1e-15);
  EXPECT_TRUE(none.covers(0.0));

  const McEstimate one = mc_event_probability(F, 2, 11.0, 1, 5.0, 200000, 5);
  EXPECT_TRUE(one.covers(0.5)) << one.estimate << " +- " << one.stderr_;

  double parts = 0.0;
  for (int k = 0; k <= 2; ++k) parts += mc_event_probability(F, 2, 11.0, k, 5.0, 200000, 6).estimate;
  const McEstimate all = mc_event_probability(F, 2, 11.0, -1, 5.0, 200000, 6);
  EXPECT_NEAR(parts, all.estimate, 1e-12);
}

TEST(McEvent, ParetoMatchesExactDecomposition) {
  const LatticeLaw F = pareto(0.4);
  const BigJumpDecomposition d = bigjump_decomposition(F, 4, 200.0, 2);
  for (int k = 0; k <= 2; ++k) {
    const McEstimate e = mc_event_probability(F, 4, 200.0, k, d.xi, 400000, 10 + k);
    EXPECT_TRUE(e.covers(d.component[static_cast<std::size_t>(k)]))
        << k << ": " << e.estimate << " +- " << e.stderr_ << " vs " << d.component[static_cast<std::size_t>(k)];
  }
}
