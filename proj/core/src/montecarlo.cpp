#include "srtlab/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "parallel.hpp"
#include "srtlab/errors.hpp"
#include "srtlab/renewal.hpp"
#include "srtlab/srt_diag.hpp"
#include "srtlab/stats.hpp"

namespace srtlab {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr std::int64_t kReach = std::int64_t{1} << 62;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::int64_t sat_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) return b > 0 ? std::numeric_limits<std::int64_t>::max() : std::numeric_limits<std::int64_t>::min();
  return r;
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : state_(mix64(seed + kGolden) ^ mix64((stream + 1) * kGolden + 0x632BE59BD9B4E019ULL)) {}

std::uint64_t CounterRng::next() noexcept {
  state_ += kGolden;
  return mix64(state_);
}

double CounterRng::uniform() noexcept {
  return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

// ---------------------------------------------------------------------------

IncrementSampler::IncrementSampler(const LatticeLaw& F) : F_(&F), lo_(F.table_lo()) {
  below_ = F.cdf(lo_ - 1);
  const auto t = F.table();
  cdf_.resize(t.size());
  long double acc = below_;
  for (std::size_t i = 0; i < t.size(); ++i) {
    acc += t[i];
    cdf_[i] = static_cast<double>(acc);
  }
}

std::int64_t IncrementSampler::search_left(double u) const {
  // smallest k < lo_ with cdf(k) >= u
  std::int64_t hi = lo_ - 1;
  std::int64_t d = 1;
  std::int64_t lo = hi - d;
  while (F_->cdf(lo) >= u) {
    if (d >= kReach) return lo;
    d *= 2;
    lo = hi - d;
  }
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (F_->cdf(mid) >= u)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

std::int64_t IncrementSampler::search_right(double v) const {
  // smallest k > table_hi with P(X > k) <= v
  std::int64_t lo = F_->table_hi();
  if (F_->survival(lo) <= v) return lo;
  std::int64_t d = 1;
  std::int64_t hi = lo + d;
  while (F_->survival(hi) > v) {
    if (d >= kReach) return hi;
    d *= 2;
    hi = lo + d;
  }
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (F_->survival(mid) <= v)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

std::int64_t IncrementSampler::sample(CounterRng& rng) const {
  const double u = rng.uniform();
  if (u <= below_) return search_left(u);
  if (!cdf_.empty() && u <= cdf_.back())
    return lo_ + static_cast<std::int64_t>(std::lower_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
  return search_right(1.0 - u);
}

std::int64_t sample_increment(const IncrementSampler& sampler, CounterRng& rng) { return sampler.sample(rng); }

// ---------------------------------------------------------------------------

bool McEstimate::covers(double exact, double sigmas) const {
  if (zero_hits) return exact >= 0.0 && exact <= upper_bound;
  const double tol = sigmas * stderr_;
  if (tol == 0.0) return std::fabs(estimate - exact) <= 1e-12 * std::max(1.0, std::fabs(exact));
  return std::fabs(estimate - exact) <= tol;
}

namespace {

// Per-walk values summed per batch; batch b uses stream b so the result does
// not depend on the number of workers.
template <class Walk>
McEstimate run_batches(std::string target, std::int64_t n_walks, std::uint64_t seed, const McOptions& options,
                       Walk&& walk) {
  if (options.batches < 16) throw ConfigError("Monte Carlo needs at least 16 batches");
  if (n_walks < options.batches) throw ConfigError("n_walks must be at least the batch count");
  const auto B = static_cast<std::size_t>(options.batches);
  std::vector<KahanSum> sums(B);
  std::vector<std::int64_t> sizes(B);
  for (std::size_t b = 0; b < B; ++b)
    sizes[b] = n_walks / options.batches + (static_cast<std::int64_t>(b) < n_walks % options.batches ? 1 : 0);
  detail::parallel_for(B, options.threads, [&](std::size_t b) {
    CounterRng rng(seed, b);
    KahanSum s;
    for (std::int64_t i = 0; i < sizes[b]; ++i) s.add(walk(rng));
    sums[b] = s;
  });

  McEstimate est;
  est.target = std::move(target);
  est.n_walks = n_walks;
  est.seed = seed;
  est.batches = options.batches;
  KahanSum total;
  std::vector<double> means(B);
  for (std::size_t b = 0; b < B; ++b) {
    total.merge(sums[b]);
    means[b] = sums[b].value() / static_cast<double>(sizes[b]);
  }
  est.estimate = total.value() / static_cast<double>(n_walks);
  KahanSum mm;
  for (double m : means) mm.add(m);
  const double mbar = mm.value() / static_cast<double>(B);
  KahanSum ss;
  for (double m : means) ss.add((m - mbar) * (m - mbar));
  est.stderr_ = std::sqrt(ss.value() / (static_cast<double>(B) * static_cast<double>(B - 1)));
  if (total.value() == 0.0) {
    est.zero_hits = true;
    est.upper_bound = 1.0 - std::pow(0.05, 1.0 / static_cast<double>(n_walks));
  }
  return est;
}

double certified_c_sup(const LatticeLaw& F) {
  const TailIndexFunction& A = F.A();
  std::vector<std::int64_t> ns;
  for (std::int64_t n = 1; n <= 64; n *= 2)
    if (10.0 * A.inverse(static_cast<double>(n)) / F.h() <= static_cast<double>(std::int64_t{1} << 18)) ns.push_back(n);
  if (ns.empty()) return std::numeric_limits<double>::quiet_NaN();
  return 2.0 * certify_uniform_bound(F, ns).constant;
}

}  // namespace

McEstimate mc_renewal_estimate(const LatticeLaw& F, double x, double w, std::int64_t n_walks, std::uint64_t seed,
                               const McOptions& options) {
  if (w < F.h() * (1.0 - 1e-12)) throw ConfigError("window width must be at least h");
  const std::int64_t kx = F.index_of(x);
  const std::int64_t kw = F.floor_index(x - w) + 1;
  const IncrementSampler sampler(F);
  if (F.one_sided()) {
    if (F.pmf(0) >= 1.0 - 1e-15) throw ConfigError("f(0) = 1: the renewal measure is degenerate");
    return run_batches("renewal", n_walks, seed, options, [&](CounterRng& rng) {
      std::int64_t s = 0;
      double visits = (s >= kw && s <= kx) ? 1.0 : 0.0;
      while (true) {
        s = sat_add(s, sampler.sample(rng));
        if (s > kx) break;
        if (s >= kw) visits += 1.0;
      }
      return visits;
    });
  }
  const TailIndexFunction& A = F.A();
  const std::int64_t cap =
      options.n_cap > 0 ? options.n_cap : std::max<std::int64_t>(64, 16 * static_cast<std::int64_t>(std::ceil(A(x))));
  McEstimate est = run_batches("renewal", n_walks, seed, options, [&](CounterRng& rng) {
    std::int64_t s = 0;
    double visits = (s >= kw && s <= kx) ? 1.0 : 0.0;
    for (std::int64_t n = 1; n <= cap; ++n) {
      s = sat_add(s, sampler.sample(rng));
      if (s >= kw && s <= kx) visits += 1.0;
    }
    return visits;
  });
  const double c_sup = options.c_sup > 0.0 ? options.c_sup : certified_c_sup(F);
  est.cap_bias = c_sup * static_cast<double>(kx - kw + 1) * inverse_scale_tail(A, cap);
  return est;
}

McEstimate mc_event_probability(const LatticeLaw& F, std::int64_t n, double x, int k, double xi,
                                std::int64_t n_walks, std::uint64_t seed, const McOptions& options) {
  if (n < 1) throw ConfigError("n must be positive");
  if (k > n) throw ConfigError("k must not exceed n");
  const std::int64_t kx = F.index_of(x);
  const std::int64_t cap = F.floor_index(xi);
  const IncrementSampler sampler(F);
  return run_batches(k < 0 ? "walk" : "bigjump", n_walks, seed, options, [&](CounterRng& rng) {
    std::int64_t s = 0;
    int big = 0;
    for (std::int64_t i = 0; i < n; ++i) {
      const std::int64_t step = sampler.sample(rng);
      s = sat_add(s, step);
      if (step > cap) ++big;
    }
    return (s == kx && (k < 0 || big == k)) ? 1.0 : 0.0;
  });
}

McEstimate mc_event_probability(const LatticeLaw& F, std::int64_t n, double x, int k, std::int64_t n_walks,
                                std::uint64_t seed, const McOptions& options) {
  const TailIndexFunction& A = F.A();
  const double xi = big_jump_params(A.alpha()).xi(A.inverse(static_cast<double>(n)), x);
  return mc_event_probability(F, n, x, k, xi, n_walks, seed, options);
}

}  // namespace srtlab
