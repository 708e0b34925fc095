#include "srtlab/lattice_law.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "srtlab/errors.hpp"

namespace srtlab {

// ---------------------------------------------------------------------------
// Tail models

double ParetoTail::mass(std::int64_t m) const {
  if (m < 1) return 0.0;
  const double x1 = static_cast<double>(m) * h_;
  const double x0 = static_cast<double>(m - 1) * h_;
  if (x1 <= 1.0) return 0.0;
  if (x0 < 1.0) return 1.0 - 1.0 / A_(x1);
  return std::expm1(A_.log_ratio(x1, x0)) / A_(x1);
}

double ParetoTail::tail_sum(std::int64_t m) const {
  const double x = static_cast<double>(std::max<std::int64_t>(m, 0)) * h_;
  return x <= 1.0 ? 1.0 : 1.0 / A_(x);
}

namespace {
constexpr std::int64_t kDensityExact = 20000;
}

DensityTail::DensityTail(TailIndexFunction A, std::int64_t stride) : A_(std::move(A)), stride_(stride) {
  if (stride_ < 1) throw ConfigError("density tail stride must be positive");
  long double s = sum_above(kDensityExact);
  exact_.assign(kDensityExact + 1, 0.0);
  exact_[kDensityExact] = static_cast<double>(s);
  for (std::int64_t n = kDensityExact - 1; n >= 0; --n) {
    s += g(n + 1);
    exact_[static_cast<std::size_t>(n)] = static_cast<double>(s);
  }
}

double DensityTail::g(std::int64_t n) const {
  if (n < 1) return 0.0;
  const double x = static_cast<double>(n);
  return 2.0 * A_.alpha() / (x * A_(x));
}

double DensityTail::integral_from(double t) const {
  const auto& L = A_.slowly_varying();
  if (L.kind() == SlowKind::constant && A_.shift() == 0.0 && t >= 1.0) return 2.0 / A_(t);
  // t e^v substitution: 2 alpha * int_0^inf dv / A(t e^v)
  boost::math::quadrature::exp_sinh<double> integrator;
  auto f = [&](double v) {
    const double a = A_(t * std::exp(v));
    return std::isfinite(a) && a > 0.0 ? 1.0 / a : 0.0;
  };
  const double val = integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity(),
                                          std::sqrt(std::numeric_limits<double>::epsilon()) * 1e-4);
  return 2.0 * A_.alpha() * val;
}

double DensityTail::sum_above(std::int64_t n) const {
  if (n < 0) n = 0;
  if (!exact_.empty() && n < static_cast<std::int64_t>(exact_.size())) return exact_[static_cast<std::size_t>(n)];
  // Euler-Maclaurin: sum_{j>n} g(j) = int_n^inf g - g/2 - g'/12 + g'''/720
  const double x = static_cast<double>(n);
  const double gn = g(n);
  const double e = A_.elasticity(x);
  const double g1 = -gn * (1.0 + e) / x;
  const double g3 = -gn * (1.0 + e) * (2.0 + e) * (3.0 + e) / (x * x * x);
  return integral_from(x) - 0.5 * gn - g1 / 12.0 + g3 / 720.0;
}

double DensityTail::mass(std::int64_t m) const {
  if (m < 1 || m % stride_ != 0) return 0.0;
  return g(m / stride_);
}

double DensityTail::tail_sum(std::int64_t m) const {
  if (m < 0) m = 0;
  return sum_above(m / stride_);
}

// ---------------------------------------------------------------------------
// LatticeLaw

const TailIndexFunction& LatticeLaw::A() const {
  if (!A_) throw InvariantError("law '" + family_ + "' carries no tail index function");
  return *A_;
}

std::int64_t LatticeLaw::index_of(double x) const {
  const double r = x / h_;
  const double k = std::round(r);
  if (std::fabs(r - k) > 1e-9 * std::max(1.0, std::fabs(r)))
    throw DomainError("point is not on the lattice of the law");
  return static_cast<std::int64_t>(k);
}

std::int64_t LatticeLaw::floor_index(double x) const {
  const double r = x / h_;
  const double k = std::round(r);
  if (std::fabs(r - k) <= 1e-9 * std::max(1.0, std::fabs(r))) return static_cast<std::int64_t>(k);
  return static_cast<std::int64_t>(std::floor(r));
}

namespace {

double atom_at(const std::vector<std::pair<std::int64_t, double>>& atoms, std::int64_t k) {
  auto it = std::lower_bound(atoms.begin(), atoms.end(), k,
                             [](const auto& a, std::int64_t key) { return a.first < key; });
  return (it != atoms.end() && it->first == k) ? it->second : 0.0;
}

// number of atoms with index < k
std::size_t atoms_below(const std::vector<std::pair<std::int64_t, double>>& atoms, std::int64_t k) {
  return static_cast<std::size_t>(
      std::lower_bound(atoms.begin(), atoms.end(), k,
                       [](const auto& a, std::int64_t key) { return a.first < key; }) -
      atoms.begin());
}

}  // namespace

double LatticeLaw::pmf(std::int64_t k) const {
  const std::int64_t hi = table_hi();
  if (k >= lo_ && k <= hi) return table_[static_cast<std::size_t>(k - lo_)];
  double v = atom_at(atoms_, k);
  if (k > hi)
    for (const auto& [w, m] : right_) v += w * m->mass(k);
  else
    for (const auto& [w, m] : left_) v += w * m->mass(-k);
  return v;
}

double LatticeLaw::right_sum(std::int64_t k) const {
  long double v = 0;
  for (const auto& [w, m] : right_) v += w * m->tail_sum(k);
  const std::size_t i = atoms_below(atoms_, k + 1);
  v += atom_prefix_.back() - atom_prefix_[i];
  return static_cast<double>(v);
}

double LatticeLaw::left_sum(std::int64_t k) const {
  long double v = 0;
  for (const auto& [w, m] : left_) v += w * m->tail_sum(-k);
  v += atom_prefix_[atoms_below(atoms_, k)];
  return static_cast<double>(v);
}

double LatticeLaw::survival(std::int64_t k) const {
  const std::int64_t hi = table_hi();
  if (k >= hi) return right_sum(k);
  if (k < lo_) return 1.0 - left_sum(k + 1);
  const long double suffix = prefix_.back() - prefix_[static_cast<std::size_t>(k - lo_ + 1)];
  return static_cast<double>(suffix + right_total_);
}

double LatticeLaw::cdf(std::int64_t k) const {
  const std::int64_t hi = table_hi();
  if (k < lo_) return left_sum(k + 1);
  if (k > hi) return 1.0 - right_sum(k);
  return static_cast<double>(left_total_ + prefix_[static_cast<std::size_t>(k - lo_ + 1)]);
}

double LatticeLaw::mass_between(std::int64_t k0, std::int64_t k1) const {
  if (k1 <= k0) return 0.0;
  if (k1 - k0 <= 64 && (k0 >= table_hi() || k1 < lo_)) {
    long double s = 0;
    for (std::int64_t k = k0 + 1; k <= k1; ++k) s += pmf(k);
    return static_cast<double>(s);
  }
  const std::int64_t hi = table_hi();
  long double total = 0;
  if (k0 < lo_ - 1) {
    const std::int64_t top = std::min(k1, lo_ - 1);
    total += left_sum(top + 1) - left_sum(k0 + 1);
  }
  const std::int64_t t0 = std::max(k0, lo_ - 1);
  const std::int64_t t1 = std::min(k1, hi);
  if (t1 > t0) total += prefix_[static_cast<std::size_t>(t1 - lo_ + 1)] - prefix_[static_cast<std::size_t>(t0 - lo_ + 1)];
  if (k1 > hi) {
    const std::int64_t r0 = std::max(k0, hi);
    total += right_sum(r0) - right_sum(k1);
  }
  return std::max(0.0, static_cast<double>(total));
}

std::vector<double> LatticeLaw::pmf_range(std::int64_t lo, std::int64_t hi) const {
  if (hi < lo) return {};
  std::vector<double> out(static_cast<std::size_t>(hi - lo + 1), 0.0);
  const std::int64_t thi = table_hi();
  for (std::int64_t k = lo; k <= hi; ++k) {
    if (k >= lo_ && k <= thi) {
      const std::int64_t stop = std::min(hi, thi);
      std::copy(table_.begin() + (k - lo_), table_.begin() + (stop - lo_ + 1), out.begin() + (k - lo));
      k = stop;
      continue;
    }
    double v = 0.0;
    if (k > thi)
      for (const auto& [w, m] : right_) v += w * m->mass(k);
    else
      for (const auto& [w, m] : left_) v += w * m->mass(-k);
    out[static_cast<std::size_t>(k - lo)] = v;
  }
  for (auto it = atoms_.begin() + static_cast<std::ptrdiff_t>(atoms_below(atoms_, lo)); it != atoms_.end() && it->first <= hi; ++it)
    out[static_cast<std::size_t>(it->first - lo)] += it->second;
  return out;
}

std::int64_t LatticeLaw::min_support() const {
  if (!left_.empty()) return std::numeric_limits<std::int64_t>::min();
  if (!atoms_.empty() && atoms_.front().first < lo_) return atoms_.front().first;
  for (std::size_t i = 0; i < table_.size(); ++i)
    if (table_[i] > 0.0) return lo_ + static_cast<std::int64_t>(i);
  if (!atoms_.empty()) return atoms_.front().first;
  for (std::int64_t k = table_hi() + 1;; ++k)
    if (pmf(k) > 0.0) return k;
}

double LatticeLaw::total_mass() const {
  return static_cast<double>(left_total_ + prefix_.back() + right_total_);
}

// ---------------------------------------------------------------------------
// Builder

LatticeLaw::Builder::Builder(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw ConfigError("lattice span must be positive");
  law_.h_ = h;
}

LatticeLaw::Builder& LatticeLaw::Builder::table(std::int64_t lo, std::vector<double> values) {
  law_.lo_ = lo;
  law_.table_ = std::move(values);
  return *this;
}

LatticeLaw::Builder& LatticeLaw::Builder::right_tail(double weight, std::shared_ptr<const TailModel> model) {
  law_.right_.emplace_back(weight, std::move(model));
  return *this;
}

LatticeLaw::Builder& LatticeLaw::Builder::left_tail(double weight, std::shared_ptr<const TailModel> model) {
  law_.left_.emplace_back(weight, std::move(model));
  return *this;
}

LatticeLaw::Builder& LatticeLaw::Builder::atom(std::int64_t k, double mass) {
  atoms_[k] += mass;
  return *this;
}

LatticeLaw::Builder& LatticeLaw::Builder::tail_index(TailIndexFunction A) {
  law_.A_ = std::move(A);
  return *this;
}

LatticeLaw::Builder& LatticeLaw::Builder::tail_constants(double p, double q) {
  law_.p_ = p;
  law_.q_ = q;
  return *this;
}

LatticeLaw::Builder& LatticeLaw::Builder::family(std::string name, std::string spec_json) {
  law_.family_ = std::move(name);
  law_.spec_json_ = std::move(spec_json);
  return *this;
}

LatticeLaw::Builder& LatticeLaw::Builder::tail_window(TailWindow w) {
  window_ = w;
  return *this;
}

LatticeLaw::Builder& LatticeLaw::Builder::component(double weight, std::shared_ptr<const LatticeLaw> law) {
  law_.components_.emplace_back(weight, std::move(law));
  return *this;
}

LatticeLaw::Builder& LatticeLaw::Builder::normalization_tolerance(double tol) {
  norm_tol_ = tol;
  return *this;
}

namespace {

[[noreturn]] void fail(const char* fmt, double a, double b = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, fmt, a, b);
  throw InvariantError(buf);
}

}  // namespace

LatticeLaw LatticeLaw::Builder::build() {
  LatticeLaw& L = law_;
  if (L.table_.empty()) throw InvariantError("law needs a non-empty table");
  for (const auto& [w, m] : L.right_)
    if (!(w > 0.0) || !m) throw InvariantError("right tail needs a positive weight and a model");
  for (const auto& [w, m] : L.left_)
    if (!(w > 0.0) || !m) throw InvariantError("left tail needs a positive weight and a model");

  const std::int64_t hi = L.table_hi();
  for (std::size_t i = 0; i < L.table_.size(); ++i)
    if (!(L.table_[i] >= 0.0) || !std::isfinite(L.table_[i]))
      fail("negative or non-finite mass %.17g at index %.0f", L.table_[i], static_cast<double>(L.lo_ + static_cast<std::int64_t>(i)));

  // junction agreement, checked before atoms are folded in
  auto junction = [&](const auto& tails, std::int64_t k, std::int64_t m) {
    if (tails.empty()) return;
    double expected = 0.0;
    for (const auto& [w, model] : tails) expected += w * model->mass(m);
    const double have = L.table_[static_cast<std::size_t>(k - L.lo_)];
    if (std::fabs(have - expected) > 1e-12) fail("table and analytic tail disagree at the junction: %.17g vs %.17g", have, expected);
  };
  junction(L.right_, hi, hi);
  if (L.lo_ < 0) junction(L.left_, L.lo_, -L.lo_);

  L.atoms_.clear();
  for (const auto& [k, m] : atoms_) {
    if (!(m >= 0.0) || !std::isfinite(m)) fail("negative atom mass %.17g at %.0f", m, static_cast<double>(k));
    if (m == 0.0) continue;
    if (k >= L.lo_ && k <= hi)
      L.table_[static_cast<std::size_t>(k - L.lo_)] += m;
    else
      L.atoms_.emplace_back(k, m);
  }
  L.atom_prefix_.assign(L.atoms_.size() + 1, 0.0L);
  for (std::size_t i = 0; i < L.atoms_.size(); ++i) L.atom_prefix_[i + 1] = L.atom_prefix_[i] + L.atoms_[i].second;

  L.prefix_.assign(L.table_.size() + 1, 0.0L);
  for (std::size_t i = 0; i < L.table_.size(); ++i) L.prefix_[i + 1] = L.prefix_[i] + L.table_[i];
  L.right_total_ = L.right_sum(hi);
  L.left_total_ = L.left_sum(L.lo_);

  bool negative = !L.left_.empty() || (!L.atoms_.empty() && L.atoms_.front().first < 0);
  for (std::int64_t k = L.lo_; k < 0 && k <= hi && !negative; ++k)
    if (L.table_[static_cast<std::size_t>(k - L.lo_)] > 0.0) negative = true;
  L.two_sided_ = negative;

  const double total = L.total_mass();
  if (std::fabs(total - 1.0) > norm_tol_) fail("total mass %.17g differs from 1 by more than %.3g", total, norm_tol_);
  if (!(L.p_ >= 0.0) || !(L.q_ >= 0.0)) throw InvariantError("tail constants p, q must be nonnegative");

  if (L.A_) {
    TailWindow w = window_.value_or(TailWindow{std::max(16.0, 16.0 * L.h_), std::exp2(20.0) * std::max(1.0, L.h_), 12});
    for (int i = 0; i < std::max(1, w.points); ++i) {
      const double t = w.points > 1 ? static_cast<double>(i) / (w.points - 1) : 0.0;
      const double x = w.x_lo * std::pow(w.x_hi / w.x_lo, t);
      const std::int64_t k = L.floor_index(x);
      const double xk = static_cast<double>(k) * L.h_;
      const double a = (*L.A_)(xk);
      if (L.p_ > 0.0 || L.survival(k) > 0.0) {
        const double ratio = L.p_ > 0.0 ? a * L.survival(k) / L.p_ : std::numeric_limits<double>::infinity();
        if (!(ratio >= 0.9 && ratio <= 1.1)) fail("tail check failed: A(x)P(X>x)/p = %.6g at x = %.6g", ratio, xk);
      } else {
        fail("tail check failed: no right tail at x = %.6g%.0f", xk);
      }
      if (L.q_ > 0.0) {
        const double ratio = a * L.cdf(-k) / L.q_;
        if (!(ratio >= 0.9 && ratio <= 1.1)) fail("tail check failed: A(x)P(X<=-x)/q = %.6g at x = %.6g", ratio, xk);
      }
    }
  }

  std::uint64_t h = fnv1a64(L.spec_json_);
  h = fnv1a64(std::string_view(reinterpret_cast<const char*>(&L.h_), sizeof L.h_), h);
  h = fnv1a64(std::string_view(reinterpret_cast<const char*>(&L.lo_), sizeof L.lo_), h);
  h = fnv1a64(std::string_view(reinterpret_cast<const char*>(L.table_.data()), L.table_.size() * sizeof(double)), h);
  for (const auto& [k, m] : L.atoms_) {
    h = fnv1a64(std::string_view(reinterpret_cast<const char*>(&k), sizeof k), h);
    h = fnv1a64(std::string_view(reinterpret_cast<const char*>(&m), sizeof m), h);
  }
  L.hash_ = h;
  return std::move(law_);
}

double mass_interval(const LatticeLaw& F, double a, double b) {
  if (b < a) throw DomainError("mass_interval requires a <= b");
  if (a == b) return 0.0;
  constexpr std::int64_t kFar = std::int64_t{1} << 62;
  auto to_index = [&](double x) -> std::int64_t {
    if (x == -std::numeric_limits<double>::infinity()) return -kFar;
    if (x == std::numeric_limits<double>::infinity()) return kFar;
    return F.floor_index(x);
  };
  const std::int64_t k0 = to_index(a);
  const std::int64_t k1 = to_index(b);
  if (k0 == -kFar && k1 == kFar) return F.total_mass();
  if (k0 == -kFar) return F.cdf(k1);
  if (k1 == kFar) return F.survival(k0);
  return F.mass_between(k0, k1);
}

LatticeLaw law_from_pmf(double h, std::int64_t k_lo, std::vector<double> pmf, std::optional<TailIndexFunction> A,
                        std::optional<TailWindow> window) {
  LatticeLaw::Builder b(h);
  b.table(k_lo, std::move(pmf)).family("custom", "{\"family\":\"custom\"}");
  if (A) b.tail_index(std::move(*A));
  if (window) b.tail_window(*window);
  return b.build();
}

}  // namespace srtlab
