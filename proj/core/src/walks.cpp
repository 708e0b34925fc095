#include <algorithm>
#include <cmath>
#include <limits>

#include "srtlab/errors.hpp"
#include "srtlab/renewal.hpp"
#include "srtlab/srt_diag.hpp"

namespace srtlab {

namespace {

// Values of a (possibly truncated) increment law on [lo, lo + v.size()).
struct Kernel {
  std::int64_t lo = 0;
  std::vector<double> v;
};

// Exact n-fold power of a kernel supported in [0, inf), kept on [0, hi].
std::vector<double> power_nonnegative(const std::vector<double>& base_in, std::int64_t n, std::int64_t hi,
                                      ErrorLedger* ledger, std::size_t budget) {
  const auto len = static_cast<std::size_t>(hi + 1);
  std::vector<double> result(len, 0.0);
  result[0] = 1.0;
  std::vector<double> base(base_in.begin(), base_in.begin() + static_cast<std::ptrdiff_t>(std::min(len, base_in.size())));
  base.resize(len, 0.0);
  bool identity = true;
  while (n > 0) {
    if (n & 1) {
      result = identity ? base : convolve_prefix(result, base, len, ledger, budget);
      identity = false;
    }
    n >>= 1;
    if (n > 0) base = square_prefix(base, len, ledger, budget);
  }
  return result;
}

// n-fold power of k on window w by stepwise convolution. Mass that leaves w is lost.
std::vector<double> power_stepwise(const LatticeLaw& F, std::int64_t cap, std::int64_t n, Window w,
                                   std::vector<double> start, ErrorLedger* ledger, std::size_t budget) {
  const std::int64_t S = w.size();
  const std::int64_t klo = -(S - 1);
  const std::int64_t khi = std::min(cap, S - 1);
  std::vector<double> p = std::move(start);
  if (n == 0) return p;
  if (khi < klo) {
    std::fill(p.begin(), p.end(), 0.0);
    return p;
  }
  const std::vector<double> kernel = F.pmf_range(klo, khi);
  const std::size_t out_len = static_cast<std::size_t>(S - klo);
  FixedKernelConvolver conv(kernel, static_cast<std::size_t>(S), out_len, budget);
  std::vector<double> out(out_len);
  for (std::int64_t step = 0; step < n; ++step) {
    conv.apply(p, out, ledger);
    std::copy(out.begin() + (-klo), out.begin() + (-klo) + S, p.begin());
  }
  return p;
}

double binom(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  long double c = 1.0L;
  for (std::int64_t i = 1; i <= k; ++i) c = c * static_cast<long double>(n - k + i) / static_cast<long double>(i);
  return static_cast<double>(c);
}

WalkPmf to_window(std::vector<double> values, std::int64_t values_lo, std::int64_t n, Window w, double full_mass) {
  WalkPmf out;
  out.n = n;
  out.k_lo = w.lo;
  out.k_hi = w.hi;
  out.values.assign(static_cast<std::size_t>(w.size()), 0.0);
  const std::int64_t values_hi = values_lo + static_cast<std::int64_t>(values.size()) - 1;
  for (std::int64_t k = std::max(w.lo, values_lo); k <= std::min(w.hi, values_hi); ++k)
    out.values[static_cast<std::size_t>(k - w.lo)] = values[static_cast<std::size_t>(k - values_lo)];
  out.escaped_mass = std::clamp(full_mass - out.total(), 0.0, 1.0);
  return out;
}

// P(S_n = k, max X_i <= cap) on window w, exact for one-sided laws.
WalkPmf capped_power(const LatticeLaw& F, std::int64_t n, std::int64_t cap, Window w, ErrorLedger* ledger,
                     std::size_t budget) {
  if (n < 0) throw ConfigError("n must be nonnegative");
  if (w.hi < w.lo) throw ConfigError("empty window");
  const double step_mass = cap == std::numeric_limits<std::int64_t>::max() ? 1.0 : F.cdf(cap);
  const double full_mass = std::pow(step_mass, static_cast<double>(n));
  if (n == 0) return to_window({1.0}, 0, 0, w, 1.0);
  if (F.one_sided()) {
    if (w.hi < 0) return to_window({}, 0, n, w, full_mass);
    const std::int64_t top = std::min(w.hi, cap);
    std::vector<double> base = top >= 0 ? F.pmf_range(0, top) : std::vector<double>{};
    base.resize(static_cast<std::size_t>(w.hi + 1), 0.0);
    return to_window(power_nonnegative(base, n, w.hi, ledger, budget), 0, n, w, full_mass);
  }
  const std::int64_t margin = std::max<std::int64_t>(w.size(), 256);
  const Window wc{std::min<std::int64_t>(w.lo, 0) - margin, std::max<std::int64_t>(w.hi, 0) + margin};
  std::vector<double> start(static_cast<std::size_t>(wc.size()), 0.0);
  start[static_cast<std::size_t>(-wc.lo)] = 1.0;
  return to_window(power_stepwise(F, cap, n, wc, std::move(start), ledger, budget), wc.lo, n, w, full_mass);
}

constexpr std::int64_t kNoCap = std::numeric_limits<std::int64_t>::max();

}  // namespace

WalkPmf walk_pmf(const LatticeLaw& F, std::int64_t n, Window w, ErrorLedger* ledger, std::size_t fft_budget) {
  return capped_power(F, n, kNoCap, w, ledger, fft_budget);
}

WalkPmf restricted_walk_pmf(const LatticeLaw& F, std::int64_t n, double xi, Window w, ErrorLedger* ledger,
                            std::size_t fft_budget) {
  const double r = xi / F.h();
  if (r < -9e15) return to_window({}, 0, n, w, n == 0 ? 1.0 : 0.0);
  return capped_power(F, n, r > 9e15 ? kNoCap : F.floor_index(xi), w, ledger, fft_budget);
}

std::vector<WalkPmf> walk_pmf_dyadic(const LatticeLaw& F, int e_max, std::int64_t k_hi, ErrorLedger* ledger,
                                     std::size_t fft_budget) {
  if (!F.one_sided()) throw ConfigError("walk_pmf_dyadic needs a one-sided law");
  if (e_max < 0 || k_hi < 0) throw ConfigError("e_max and k_hi must be nonnegative");
  const auto len = static_cast<std::size_t>(k_hi + 1);
  std::vector<WalkPmf> out;
  std::vector<double> cur = F.pmf_range(0, k_hi);
  const Window w{0, k_hi};
  for (int e = 0; e <= e_max; ++e) {
    if (e > 0) cur = square_prefix(cur, len, ledger, fft_budget);
    out.push_back(to_window(cur, 0, std::int64_t{1} << e, w, 1.0));
  }
  return out;
}

std::vector<double> point_marginals(const LatticeLaw& F, std::int64_t k, std::int64_t n_max, ErrorLedger* ledger) {
  if (n_max < 0) throw ConfigError("n_max must be nonnegative");
  std::vector<double> res(static_cast<std::size_t>(n_max + 1), 0.0);
  res[0] = k == 0 ? 1.0 : 0.0;
  if (n_max == 0) return res;
  if (F.one_sided()) {
    if (k < 0) return res;
    const std::int64_t S = k + 1;
    const std::vector<double> kernel = F.pmf_range(0, k);
    std::vector<double> p(static_cast<std::size_t>(S), 0.0);
    p[0] = 1.0;
    FixedKernelConvolver conv(kernel, static_cast<std::size_t>(S), static_cast<std::size_t>(S));
    std::vector<double> out(static_cast<std::size_t>(S));
    for (std::int64_t n = 1; n <= n_max; ++n) {
      conv.apply(p, out, ledger);
      p.swap(out);
      res[static_cast<std::size_t>(n)] = p[static_cast<std::size_t>(k)];
      if (std::all_of(p.begin(), p.end(), [](double v) { return v == 0.0; })) break;
    }
    return res;
  }
  const std::int64_t margin = std::max<std::int64_t>(std::llabs(k), 1024);
  const Window wc{std::min<std::int64_t>(k, 0) - margin, std::max<std::int64_t>(k, 0) + margin};
  std::vector<double> p(static_cast<std::size_t>(wc.size()), 0.0);
  p[static_cast<std::size_t>(-wc.lo)] = 1.0;
  for (std::int64_t n = 1; n <= n_max; ++n) {
    p = power_stepwise(F, kNoCap, 1, wc, std::move(p), ledger, kDefaultFftBudget);
    res[static_cast<std::size_t>(n)] = p[static_cast<std::size_t>(k - wc.lo)];
  }
  return res;
}

std::vector<double> small_n_sums(const LatticeLaw& F, double x, std::span<const double> deltas) {
  if (x < F.h()) throw DomainError("small_n_sum needs x >= h");
  const TailIndexFunction& A = F.A();
  const std::int64_t k = F.index_of(x);
  std::int64_t n_top = 0;
  std::vector<std::int64_t> cut;
  for (double d : deltas) {
    if (!(d > 0.0 && d <= 1.0)) throw ConfigError("delta must lie in (0, 1]");
    const double a = A(d * x);
    cut.push_back(a < 1.0 ? 0 : static_cast<std::int64_t>(std::floor(a)));
    n_top = std::max(n_top, cut.back());
  }
  const std::vector<double> marg = point_marginals(F, k, n_top);
  std::vector<long double> prefix(marg.size(), 0.0L);
  for (std::size_t n = 1; n < marg.size(); ++n) prefix[n] = prefix[n - 1] + marg[n];
  std::vector<double> out;
  const double scale = x / A(x);
  for (std::int64_t c : cut) out.push_back(c == 0 ? 0.0 : scale * static_cast<double>(prefix[static_cast<std::size_t>(c)]));
  return out;
}

double small_n_sum(const LatticeLaw& F, double x, double delta) {
  const double d[] = {delta};
  return small_n_sums(F, x, d)[0];
}

BigJumpDecomposition bigjump_decomposition(const LatticeLaw& F, std::int64_t n, double x, int k_max) {
  const double an = F.A().inverse(static_cast<double>(std::max<std::int64_t>(n, 1)));
  return bigjump_decomposition(F, n, x, k_max, big_jump_params(F.A().alpha()).xi(an, x));
}

BigJumpDecomposition bigjump_decomposition(const LatticeLaw& F, std::int64_t n, double x, int k_max, double xi) {
  if (n < 1) throw ConfigError("bigjump_decomposition needs n >= 1");
  if (k_max < 0) throw ConfigError("k_max must be nonnegative");
  BigJumpDecomposition out;
  out.n = n;
  out.x = x;
  out.xi = xi;
  const std::int64_t km = std::min<std::int64_t>(k_max, n);
  const std::int64_t kx = F.index_of(x);
  const std::int64_t cap = F.floor_index(xi);

  Window w;
  std::int64_t m_top = km;
  if (F.one_sided()) {
    if (kx < 0) {
      out.component.assign(static_cast<std::size_t>(km + 1), 0.0);
      out.remainder_direct = true;
      return out;
    }
    w = {0, kx};
    // each big jump is at least cap + 1 lattice steps
    const std::int64_t most = cap + 1 > 0 ? kx / (cap + 1) : n;
    m_top = std::max(km, std::min(n, most));
    out.remainder_direct = m_top <= 64;
    if (!out.remainder_direct) m_top = km;
  } else {
    const std::int64_t margin = std::max<std::int64_t>(std::llabs(kx), 256);
    w = {std::min<std::int64_t>(kx, 0) - margin, std::max<std::int64_t>(kx, 0) + margin};
  }

  // small-part powers s^{*(n-j)} for j = m_top..0 and big-part powers b^{*j}
  std::vector<std::vector<double>> small(static_cast<std::size_t>(m_top + 1));
  std::vector<std::vector<double>> big(static_cast<std::size_t>(m_top + 1));
  const std::int64_t S = w.size();
  std::vector<double> sker = F.pmf_range(w.lo - w.hi, std::min(cap, w.hi - w.lo));
  const std::int64_t s_lo = w.lo - w.hi;
  std::vector<double> bker;
  const std::int64_t b_lo = std::max(cap + 1, w.lo - w.hi);
  if (b_lo <= w.hi - w.lo) bker = F.pmf_range(b_lo, w.hi - w.lo);

  auto step = [&](const std::vector<double>& p, const std::vector<double>& ker, std::int64_t ker_lo) {
    // (p * ker) restricted to w, p on w
    std::vector<double> res(static_cast<std::size_t>(S), 0.0);
    if (ker.empty()) return res;
    const std::vector<double> full = convolve_prefix(p, ker, p.size() + ker.size() - 1);
    for (std::int64_t t = 0; t < static_cast<std::int64_t>(full.size()); ++t) {
      const std::int64_t pos = t + w.lo + ker_lo;
      if (pos >= w.lo && pos <= w.hi) res[static_cast<std::size_t>(pos - w.lo)] = full[static_cast<std::size_t>(t)];
    }
    return res;
  };

  WalkPmf base = restricted_walk_pmf(F, n - m_top, xi, w);
  small[static_cast<std::size_t>(m_top)] = base.values;
  for (std::int64_t j = m_top - 1; j >= 0; --j)
    small[static_cast<std::size_t>(j)] = step(small[static_cast<std::size_t>(j + 1)], sker, s_lo);
  std::vector<double> delta(static_cast<std::size_t>(S), 0.0);
  if (0 >= w.lo && 0 <= w.hi) delta[static_cast<std::size_t>(-w.lo)] = 1.0;
  big[0] = delta;
  for (std::int64_t j = 1; j <= m_top; ++j) big[static_cast<std::size_t>(j)] = step(big[static_cast<std::size_t>(j - 1)], bker, b_lo);

  // component j: C(n, j) sum_i b^{*j}(i) s^{*(n-j)}(kx - i), both on w
  auto component = [&](std::int64_t j) {
    long double acc = 0;
    const auto& b = big[static_cast<std::size_t>(j)];
    const auto& s = small[static_cast<std::size_t>(j)];
    for (std::int64_t i = w.lo; i <= w.hi; ++i) {
      const std::int64_t rest = kx - i;
      if (rest < w.lo || rest > w.hi) continue;
      acc += static_cast<long double>(b[static_cast<std::size_t>(i - w.lo)]) * s[static_cast<std::size_t>(rest - w.lo)];
    }
    return binom(n, j) * static_cast<double>(acc);
  };
  long double sum_k = 0;
  for (std::int64_t j = 0; j <= km; ++j) {
    out.component.push_back(component(j));
    sum_k += out.component.back();
  }
  if (out.remainder_direct) {
    long double rem = 0;
    for (std::int64_t j = km + 1; j <= m_top; ++j) rem += component(j);
    out.remainder = static_cast<double>(rem);
    out.total = static_cast<double>(sum_k + rem);
  } else {
    out.total = walk_pmf(F, n, Window{kx, kx}).at(kx);
    out.remainder = std::max(0.0, out.total - static_cast<double>(sum_k));
  }
  return out;
}

UniformBoundReport certify_uniform_bound(const LatticeLaw& F, std::span<const std::int64_t> n_list,
                                         double window_scale) {
  UniformBoundReport rep;
  const TailIndexFunction& A = F.A();
  double running = 0.0;
  for (std::int64_t n : n_list) {
    const double an = A.inverse(static_cast<double>(n));
    const auto reach = static_cast<std::int64_t>(std::ceil(window_scale * an / F.h())) + 1;
    const Window w = F.one_sided() ? Window{0, reach} : Window{-reach, reach};
    const WalkPmf p = walk_pmf(F, n, w);
    const double peak = *std::max_element(p.values.begin(), p.values.end());
    rep.n.push_back(n);
    rep.scaled_max.push_back(an * peak);
    if (running > 0.0 && an * peak > 2.0 * running) rep.monotone_sane = false;
    running = std::max(running, an * peak);
  }
  rep.constant = running;
  return rep;
}

}  // namespace srtlab
