#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "srtlab/lattice_law.hpp"

namespace srtlab {

/// SplitMix64 stream keyed by (seed, stream index); identical keys give identical draws.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);
  std::uint64_t next() noexcept;
  /// Uniform in (0, 1), never 0 or 1.
  double uniform() noexcept;

 private:
  std::uint64_t state_;
};

/// Inverse-transform sampler: binary search on the table cdf, bisection on the
/// analytic tail function outside it.
class IncrementSampler {
 public:
  explicit IncrementSampler(const LatticeLaw& F);
  /// Lattice index of one increment.
  std::int64_t sample(CounterRng& rng) const;
  const LatticeLaw& law() const noexcept { return *F_; }

 private:
  std::int64_t search_left(double u) const;
  std::int64_t search_right(double v) const;

  const LatticeLaw* F_;
  std::int64_t lo_;
  std::vector<double> cdf_;  // P(X <= (lo_ + i) h)
  double below_ = 0.0;       // P(X < lo_ h)
};

std::int64_t sample_increment(const IncrementSampler& sampler, CounterRng& rng);

struct McOptions {
  int batches = 32;         // at least 16
  unsigned threads = 0;     // 0 selects hardware concurrency
  std::int64_t n_cap = 0;   // two-sided walks: step cap (0 selects 4 A(x))
  double c_sup = 0.0;       // two-sided cap bias: uniform-bound constant (0 certifies one)
};

struct McEstimate {
  std::string target;
  double estimate = 0.0;
  double stderr_ = 0.0;   // batch means
  std::int64_t n_walks = 0;
  std::uint64_t seed = 0;
  int batches = 0;
  bool zero_hits = false;
  double upper_bound = std::numeric_limits<double>::quiet_NaN();  // one-sided 95% bound when zero_hits
  double cap_bias = 0.0;  // bound on the mass ignored by the step cap

  /// |estimate - exact| <= 3 stderr, or within the one-sided bound on zero hits.
  bool covers(double exact, double sigmas = 3.0) const;
};

/// Mean number of visits of (S_n)_{n >= 0} to (x - w, x].
McEstimate mc_renewal_estimate(const LatticeLaw& F, double x, double w, std::int64_t n_walks, std::uint64_t seed,
                               const McOptions& options = {});

/// Frequency of {S_n in x + I} and exactly k increments above xi; k < 0 drops the big-jump
/// condition.
McEstimate mc_event_probability(const LatticeLaw& F, std::int64_t n, double x, int k, double xi,
                                std::int64_t n_walks, std::uint64_t seed, const McOptions& options = {});
/// Same with xi = xi_{n,x} from the big-jump parameters of F.
McEstimate mc_event_probability(const LatticeLaw& F, std::int64_t n, double x, int k, std::int64_t n_walks,
                                std::uint64_t seed, const McOptions& options = {});

}  // namespace srtlab
