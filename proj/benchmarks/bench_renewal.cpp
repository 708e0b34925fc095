#include <benchmark/benchmark.h>

#include "srtlab/criteria.hpp"
#include "srtlab/renewal.hpp"

using namespace srtlab;

namespace {

const LatticeLaw& pareto(double alpha) {
  static const LatticeLaw a03 = make_pareto_lattice(TailIndexFunction(0.3, SlowlyVarying::constant()), 1.0);
  static const LatticeLaw a07 = make_pareto_lattice(TailIndexFunction(0.7, SlowlyVarying::constant()), 1.0);
  return alpha < 0.5 ? a03 : a07;
}

}  // namespace

static void BM_RenewalRecursion(benchmark::State& state) {
  const auto K = state.range(0);
  const LatticeLaw& F = pareto(0.7);
  for (auto _ : state) benchmark::DoNotOptimize(renewal_measure_onesided(F, K, RenewalMethod::recursion));
  state.SetComplexityN(K);
}
BENCHMARK(BM_RenewalRecursion)->RangeMultiplier(4)->Range(1 << 8, 1 << 14)->Complexity(benchmark::oNSquared)
    ->Unit(benchmark::kMillisecond);

static void BM_RenewalSeries(benchmark::State& state) {
  const auto K = state.range(0);
  const LatticeLaw& F = pareto(0.7);
  for (auto _ : state) benchmark::DoNotOptimize(renewal_measure_onesided(F, K, RenewalMethod::series_reciprocal));
  state.SetComplexityN(K);
}
BENCHMARK(BM_RenewalSeries)->RangeMultiplier(4)->Range(1 << 8, 1 << 20)->Unit(benchmark::kMillisecond);

static void BM_SmallNSum(benchmark::State& state) {
  const LatticeLaw& F = pareto(0.3);
  const double x = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(small_n_sum(F, x, 0.2));
}
BENCHMARK(BM_SmallNSum)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Unit(benchmark::kMillisecond);

static void BM_CriterionGrid(benchmark::State& state) {
  const LatticeLaw& F = pareto(0.3);
  const auto eta = default_eta_list();
  const auto xs = default_x_list();
  GridOptions o;
  o.threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_grid(F, CriterionKind::ns_density, eta, xs, o));
}
BENCHMARK(BM_CriterionGrid)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
