#include <random>

#include <benchmark/benchmark.h>

#include "srtlab/convolution.hpp"

using namespace srtlab;

namespace {

std::vector<double> random_pmf(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(n);
  double s = 0.0;
  for (double& x : v) s += x = u(rng);
  for (double& x : v) x /= s;
  return v;
}

}  // namespace

static void BM_ConvolveDirect(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_pmf(n, 1), b = random_pmf(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(convolve_direct(a, b, n));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ConvolveDirect)->RangeMultiplier(4)->Range(64, 4096)->Complexity(benchmark::oNSquared);

static void BM_ConvolvePrefix(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_pmf(n, 1), b = random_pmf(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(convolve_prefix(a, b, n));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ConvolvePrefix)->RangeMultiplier(4)->Range(64, 1 << 20)->Complexity(benchmark::oNLogN);

static void BM_SquarePrefix(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_pmf(n, 3);
  for (auto _ : state) benchmark::DoNotOptimize(square_prefix(a, n));
}
BENCHMARK(BM_SquarePrefix)->RangeMultiplier(4)->Range(1 << 10, 1 << 20);

static void BM_FixedKernel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto kernel = random_pmf(n, 4), signal = random_pmf(n, 5);
  FixedKernelConvolver conv(kernel, n, n);
  std::vector<double> out(n);
  for (auto _ : state) {
    conv.apply(signal, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_FixedKernel)->RangeMultiplier(4)->Range(1 << 10, 1 << 20);

BENCHMARK_MAIN();
