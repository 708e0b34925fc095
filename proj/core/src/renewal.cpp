#include "srtlab/renewal.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "srtlab/errors.hpp"

namespace srtlab {

std::string_view to_string(RenewalMethod m) {
  switch (m) {
    case RenewalMethod::recursion: return "recursion";
    case RenewalMethod::series_reciprocal: return "series-reciprocal";
    case RenewalMethod::walk_sum: return "walk-sum";
  }
  return "unknown";
}

RenewalMethod renewal_method_from_string(std::string_view s) {
  if (s == "recursion") return RenewalMethod::recursion;
  if (s == "series-reciprocal") return RenewalMethod::series_reciprocal;
  if (s == "walk-sum") return RenewalMethod::walk_sum;
  throw ConfigError("unknown renewal method '" + std::string(s) + "'");
}

double RenewalTable::at(std::int64_t k) const {
  if (k < 0 || k > K) throw DomainError("lattice index outside the renewal table");
  return u[static_cast<std::size_t>(k)];
}

double RenewalTable::U(std::int64_t k) const {
  if (k < 0) return 0.0;
  if (k > K) throw DomainError("lattice index outside the renewal table");
  return cumulative[static_cast<std::size_t>(k)];
}

namespace {

double degenerate_check(std::span<const double> f) {
  const double f0 = f.empty() ? 0.0 : f[0];
  if (f0 >= 1.0 - 1e-15) throw ConfigError("f(0) = 1: the renewal measure is degenerate");
  return 1.0 - f0;
}

void fill_cumulative(RenewalTable& t) {
  t.cumulative.resize(t.u.size());
  long double s = 0;
  for (std::size_t i = 0; i < t.u.size(); ++i) {
    s += t.u[i];
    t.cumulative[i] = static_cast<double>(s);
  }
}

}  // namespace

std::vector<double> renewal_recursion(std::span<const double> f, std::size_t K) {
  const long double d = degenerate_check(f);
  std::vector<long double> u(K + 1, 0.0L);
  const std::size_t top = std::min(f.size(), K + 1);
  for (std::size_t k = 0; k <= K; ++k) {
    long double s = k == 0 ? 1.0L : 0.0L;
    for (std::size_t j = 1; j <= k && j < top; ++j) s += static_cast<long double>(f[j]) * u[k - j];
    u[k] = s / d;
  }
  return {u.begin(), u.end()};
}

std::vector<double> renewal_series_reciprocal(std::span<const double> f, std::size_t K, ErrorLedger* ledger) {
  const double d = degenerate_check(f);
  const std::size_t n = K + 1;
  std::vector<double> g(n, 0.0);
  for (std::size_t j = 1; j < std::min(f.size(), n); ++j) g[j] = f[j] / d;
  std::vector<double> u(n, 0.0);
  std::vector<double> acc(n, 0.0);

  constexpr std::size_t kLeaf = 64;
  std::function<void(std::size_t, std::size_t)> solve = [&](std::size_t l, std::size_t r) {
    if (r - l <= kLeaf) {
      for (std::size_t k = l; k < r; ++k) {
        long double s = k == 0 ? 1.0L / d : acc[k];
        for (std::size_t i = l; i < k; ++i) s += static_cast<long double>(g[k - i]) * u[i];
        u[k] = static_cast<double>(s);
      }
      return;
    }
    const std::size_t m = l + (r - l) / 2;
    solve(l, m);
    const std::vector<double> c = convolve_prefix(std::span<const double>(u).subspan(l, m - l),
                                                  std::span<const double>(g).first(r - l), r - l, ledger);
    for (std::size_t k = m; k < r; ++k) acc[k] += c[k - l];
    solve(m, r);
  };
  solve(0, n);
  return u;
}

RenewalTable renewal_measure_onesided(const LatticeLaw& F, std::int64_t K, RenewalMethod method) {
  if (K < 0) throw ConfigError("K must be nonnegative");
  if (!F.one_sided()) throw ConfigError("renewal_measure_onesided needs a law without negative mass");
  RenewalTable t;
  t.h = F.h();
  t.K = K;
  t.method = method;
  t.law_hash = F.content_hash();
  const std::vector<double> f = F.pmf_range(0, K);
  switch (method) {
    case RenewalMethod::recursion: t.u = renewal_recursion(f, static_cast<std::size_t>(K)); break;
    case RenewalMethod::series_reciprocal:
      t.u = renewal_series_reciprocal(f, static_cast<std::size_t>(K), &t.ledger);
      break;
    case RenewalMethod::walk_sum: throw ConfigError("walk-sum is the two-sided method");
  }
  fill_cumulative(t);
  return t;
}

double inverse_scale_tail(const TailIndexFunction& A, std::int64_t N) {
  const double aN = A.inverse(static_cast<double>(std::max<std::int64_t>(N, 1)));
  const double alpha = A.alpha();
  if (A.slowly_varying().kind() == SlowKind::constant && A.shift() == 0.0 && aN >= 1.0)
    return alpha / (1.0 - alpha) * std::pow(aN, alpha - 1.0);
  // t = A(y): integral of A'(y)/y over y > a_N
  boost::math::quadrature::exp_sinh<double> integrator;
  auto f = [&](double v) {
    const double y = aN * std::exp(v);
    return A.derivative(y);
  };
  return integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity());
}

RenewalTable renewal_measure_twosided(const LatticeLaw& F, std::int64_t K, std::int64_t n_max,
                                      const TwoSidedOptions& options) {
  if (K < 0 || n_max < 1) throw ConfigError("K must be nonnegative and n_max positive");
  if (!F.tail_index()) throw ConfigError("two-sided renewal needs a law with a tail index function");
  const TailIndexFunction& A = F.A();
  const std::int64_t M = options.margin < 0 ? K : options.margin;
  const std::int64_t lo = -M;
  const std::int64_t S = K + 2 * M + 1;
  const std::vector<double> kernel = F.pmf_range(-(S - 1), S - 1);

  RenewalTable t;
  t.h = F.h();
  t.K = K;
  t.method = RenewalMethod::walk_sum;
  t.n_max = n_max;
  t.law_hash = F.content_hash();
  t.u.assign(static_cast<std::size_t>(K + 1), 0.0);

  std::vector<long double> acc(static_cast<std::size_t>(K + 1), 0.0L);
  std::vector<double> p(static_cast<std::size_t>(S), 0.0);
  p[static_cast<std::size_t>(-lo)] = 1.0;
  acc[0] += 1.0L;

  FixedKernelConvolver conv(kernel, static_cast<std::size_t>(S), static_cast<std::size_t>(2 * S - 1),
                            options.fft_budget);
  std::vector<double> out(static_cast<std::size_t>(2 * S - 1));
  double scaled_max = 0.0;
  double escaped = 0.0;
  const bool one_sided = F.one_sided();
  const std::int64_t kmin = one_sided ? F.min_support() : 0;
  for (std::int64_t n = 1; n <= n_max; ++n) {
    conv.apply(p, out, &t.ledger);
    std::copy(out.begin() + (S - 1), out.begin() + (2 * S - 1), p.begin());
    long double total = 0, peak = 0;
    for (double v : p) {
      total += v;
      peak = std::max<long double>(peak, v);
    }
    escaped = std::max(0.0, 1.0 - static_cast<double>(total));
    for (std::int64_t k = 0; k <= K; ++k) acc[static_cast<std::size_t>(k)] += p[static_cast<std::size_t>(k - lo)];
    if (escaped < 0.5) scaled_max = std::max(scaled_max, A.inverse(static_cast<double>(n)) * static_cast<double>(peak));
    if (one_sided && kmin >= 1 && n * kmin > K) break;
  }
  for (std::int64_t k = 0; k <= K; ++k) t.u[static_cast<std::size_t>(k)] = static_cast<double>(acc[static_cast<std::size_t>(k)]);

  t.c_sup = 2.0 * scaled_max;
  double remainder = 0.0;
  double window_bound = 0.0;
  if (!(one_sided && kmin >= 1 && n_max * kmin >= K)) {
    remainder = t.c_sup * inverse_scale_tail(A, n_max);
    if (!one_sided) {
      // lost mass re-enters at most G(0,0) times per unit, and G(y,k) <= G(0,0)
      const double g00 = escaped < 1.0 ? (t.u[0] + remainder) / (1.0 - escaped) : std::numeric_limits<double>::infinity();
      window_bound = escaped * g00;
    }
  }
  const double bound = remainder + window_bound;
  t.truncation_error.assign(static_cast<std::size_t>(K + 1), bound);
  fill_cumulative(t);
  if (bound > options.tolerance)
    throw ToleranceError("two-sided truncation bound " + std::to_string(bound) + " exceeds tolerance " +
                             std::to_string(options.tolerance),
                         bound);
  return t;
}

}  // namespace srtlab
