#include "srtlab/regvar.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include <boost/math/tools/roots.hpp>
#include <json.hpp>

#include "srtlab/errors.hpp"

namespace srtlab {

using nlohmann::json;

std::string_view to_string(SlowKind kind) {
  switch (kind) {
    case SlowKind::constant: return "constant";
    case SlowKind::log_power: return "log-power";
    case SlowKind::reciprocal_log: return "reciprocal-log";
    case SlowKind::tabulated: return "tabulated";
  }
  return "unknown";
}

SlowlyVarying SlowlyVarying::constant(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("constant slowly varying factor must be positive");
  SlowlyVarying L;
  L.kind_ = SlowKind::constant;
  L.scale_ = c;
  return L;
}

SlowlyVarying SlowlyVarying::log_power(double beta) {
  if (!std::isfinite(beta)) throw ConfigError("log-power exponent must be finite");
  SlowlyVarying L;
  L.kind_ = SlowKind::log_power;
  L.beta_ = beta;
  return L;
}

SlowlyVarying SlowlyVarying::reciprocal_log() {
  SlowlyVarying L;
  L.kind_ = SlowKind::reciprocal_log;
  L.beta_ = -1.0;
  return L;
}

SlowlyVarying SlowlyVarying::tabulated(std::vector<double> x, std::vector<double> value,
                                       double slack) {
  if (x.empty() || x.size() != value.size())
    throw ConfigError("tabulated profile needs matching, non-empty breakpoint and value lists");
  if (!(slack > 0.0)) throw ConfigError("tabulated profile slack must be positive");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(value[i] > 0.0) || !std::isfinite(x[i]) || !std::isfinite(value[i]))
      throw ConfigError("tabulated profile needs positive finite breakpoints and values");
    if (i > 0 && !(x[i] > x[i - 1])) throw ConfigError("tabulated breakpoints must increase strictly");
  }
  SlowlyVarying L;
  L.kind_ = SlowKind::tabulated;
  L.slack_ = slack;
  L.tx_ = std::move(x);
  L.tv_ = std::move(value);
  for (std::size_t i = 0; i < L.tx_.size(); ++i) {
    L.log_tx_.push_back(std::log(L.tx_[i]));
    L.log_tv_.push_back(std::log(L.tv_[i]));
  }
  // doubling ratios, sampled at every breakpoint and on a dyadic ladder through the table
  std::vector<double> probes(L.tx_.begin(), L.tx_.end());
  for (double p = L.tx_.front() / 2; p <= L.tx_.back(); p *= 2) probes.push_back(p);
  for (double p : probes) {
    const double r = L(2 * p) / L(p);
    if (r > 1 + slack || r < 1 / (1 + slack)) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "tabulated profile: L(2x)/L(x) = %.6g at x = %.6g exceeds slack %.3g",
                    r, p, slack);
      throw ConfigError(buf);
    }
  }
  return L;
}

std::size_t SlowlyVarying::segment(double x) const {
  // index i with tx_[i] <= x < tx_[i+1]; caller guarantees tx_.front() <= x < tx_.back()
  auto it = std::upper_bound(tx_.begin(), tx_.end(), x);
  return static_cast<std::size_t>(it - tx_.begin()) - 1;
}

double SlowlyVarying::log_value(double x) const {
  switch (kind_) {
    case SlowKind::constant: return std::log(scale_);
    case SlowKind::log_power:
    case SlowKind::reciprocal_log: return beta_ * std::log(std::log1p(x));
    case SlowKind::tabulated: {
      if (x <= tx_.front()) return log_tv_.front();
      if (x >= tx_.back()) return log_tv_.back();
      const std::size_t i = segment(x);
      const double t = (std::log(x) - log_tx_[i]) / (log_tx_[i + 1] - log_tx_[i]);
      return log_tv_[i] + t * (log_tv_[i + 1] - log_tv_[i]);
    }
  }
  return 0.0;
}

double SlowlyVarying::operator()(double x) const {
  if (kind_ == SlowKind::constant) return scale_;
  return std::exp(log_value(x));
}

double SlowlyVarying::elasticity(double x) const {
  switch (kind_) {
    case SlowKind::constant: return 0.0;
    case SlowKind::log_power:
    case SlowKind::reciprocal_log:
      if (x <= 0.0) return beta_;
      return beta_ * x / ((1.0 + x) * std::log1p(x));
    case SlowKind::tabulated: {
      if (x <= tx_.front() || x >= tx_.back()) return 0.0;
      const std::size_t i = segment(x);
      return (log_tv_[i + 1] - log_tv_[i]) / (log_tx_[i + 1] - log_tx_[i]);
    }
  }
  return 0.0;
}

double SlowlyVarying::log_ratio(double x1, double x0) const {
  switch (kind_) {
    case SlowKind::constant: return 0.0;
    case SlowKind::log_power:
    case SlowKind::reciprocal_log: {
      const double l0 = std::log1p(x0);
      const double dl = std::log1p((x1 - x0) / (1.0 + x0));
      return beta_ * std::log1p(dl / l0);
    }
    case SlowKind::tabulated: {
      const bool inside0 = x0 > tx_.front() && x0 < tx_.back();
      const bool inside1 = x1 > tx_.front() && x1 < tx_.back();
      if (inside0 && inside1 && segment(x0) == segment(x1))
        return elasticity(x0) * std::log1p((x1 - x0) / x0);
      return log_value(x1) - log_value(x0);
    }
  }
  return 0.0;
}

double SlowlyVarying::sup_between(double a, double b) const {
  if (b < a) std::swap(a, b);
  switch (kind_) {
    case SlowKind::constant: return scale_;
    case SlowKind::log_power:
    case SlowKind::reciprocal_log: return beta_ >= 0.0 ? (*this)(b) : (*this)(a);
    case SlowKind::tabulated: {
      double best = std::max((*this)(a), (*this)(b));
      auto lo = std::upper_bound(tx_.begin(), tx_.end(), a);
      auto hi = std::lower_bound(tx_.begin(), tx_.end(), b);
      for (auto it = lo; it < hi; ++it)
        best = std::max(best, tv_[static_cast<std::size_t>(it - tx_.begin())]);
      return best;
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------------------

TailIndexFunction::TailIndexFunction(double alpha, SlowlyVarying L) : alpha_(alpha), L_(std::move(L)) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0,1)");
  if (L_.kind() == SlowKind::tabulated) {
    const auto x = L_.table_x();
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
      if (alpha_ + L_.elasticity(0.5 * (x[i] + x[i + 1])) <= 0.0)
        throw ConfigError("tabulated profile decays faster than x^-alpha; A would not be increasing");
    }
  } else if (alpha_ + L_.elasticity(1.0) <= 0.0) {
    // the raw elasticity is increasing in y for the logarithmic kinds
    auto g = [&](double y) { return alpha_ + L_.elasticity(y); };
    double hi = 2.0;
    while (g(hi) <= 0.0) hi *= 2.0;
    boost::math::tools::eps_tolerance<double> tol(50);
    std::uintmax_t iters = 200;
    auto [lo_root, hi_root] = boost::math::tools::toms748_solve(g, 1.0, hi, tol, iters);
    shift_ = 0.5 * (lo_root + hi_root) - 1.0;
  }
  log_norm_ = raw_log(1.0 + shift_);
}

double TailIndexFunction::raw_log(double y) const { return alpha_ * std::log(y) + L_.log_value(y); }

double TailIndexFunction::log_value(double x) const {
  if (x <= 1.0) return (std::max(x, 0.0) - 1.0) * std::numbers::ln2;
  return raw_log(x + shift_) - log_norm_;
}

double TailIndexFunction::operator()(double x) const {
  if (x <= 1.0) return std::exp2(std::max(x, 0.0) - 1.0);
  if (shift_ == 0.0 && L_.kind() == SlowKind::constant) return std::pow(x, alpha_);
  return std::exp(log_value(x));
}

double TailIndexFunction::log_ratio(double x1, double x0) const {
  if (x0 <= 1.0 || x1 <= 1.0) return log_value(x1) - log_value(x0);
  const double y0 = x0 + shift_;
  const double y1 = x1 + shift_;
  return alpha_ * std::log1p((y1 - y0) / y0) + L_.log_ratio(y1, y0);
}

double TailIndexFunction::elasticity(double x) const {
  if (x <= 1.0) return std::max(x, 0.0) * std::numbers::ln2;
  const double y = x + shift_;
  return x / y * (alpha_ + L_.elasticity(y));
}

double TailIndexFunction::derivative(double x) const {
  if (x <= 1.0) return std::numbers::ln2 * (*this)(x);
  return (*this)(x) * elasticity(x) / x;
}

double TailIndexFunction::inverse(double y) const {
  if (!(y >= 0.5) || !std::isfinite(y)) throw DomainError("inverse_A requires y >= 1/2");
  if (y <= 1.0) return 1.0 + std::log2(y);
  if (shift_ == 0.0 && L_.kind() == SlowKind::constant) {
    return std::pow(y, 1.0 / alpha_);
  }
  const double target = std::log(y);
  auto g = [&](double x) { return log_value(x) - target; };
  const double seed = std::exp(target / alpha_);
  double lo = 1.0;
  double hi = std::max(2.0, 2.0 * seed);
  while (g(hi) < 0.0) {
    lo = hi;
    hi *= 4.0;
    if (hi > 1e300) throw DomainError("inverse_A: no bracket below 1e300");
  }
  if (seed / 4 > lo && g(seed / 4) < 0.0) lo = seed / 4;
  boost::math::tools::eps_tolerance<double> tol(50);
  std::uintmax_t iters = 300;
  auto [a, b] = boost::math::tools::toms748_solve(g, lo, hi, tol, iters);
  return 0.5 * (a + b);
}

namespace {

json slowly_varying_json(const SlowlyVarying& L) {
  json params = json::object();
  switch (L.kind()) {
    case SlowKind::constant: params["c"] = L.scale(); break;
    case SlowKind::log_power: params["beta"] = L.beta(); break;
    case SlowKind::reciprocal_log: break;
    case SlowKind::tabulated:
      params["x"] = std::vector<double>(L.table_x().begin(), L.table_x().end());
      params["value"] = std::vector<double>(L.table_value().begin(), L.table_value().end());
      params["slack"] = L.slack();
      break;
  }
  return json{{"kind", std::string(to_string(L.kind()))}, {"params", params}};
}

SlowlyVarying slowly_varying_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const json params = j.value("params", json::object());
  if (kind == "constant") return SlowlyVarying::constant(params.value("c", 1.0));
  if (kind == "log-power") return SlowlyVarying::log_power(params.at("beta").get<double>());
  if (kind == "reciprocal-log") return SlowlyVarying::reciprocal_log();
  if (kind == "tabulated")
    return SlowlyVarying::tabulated(params.at("x").get<std::vector<double>>(),
                                    params.at("value").get<std::vector<double>>(),
                                    params.value("slack", 0.25));
  throw ConfigError("unknown slowly varying kind '" + kind + "'");
}

}  // namespace

std::string TailIndexFunction::serialize() const {
  json j{{"alpha", alpha_}, {"L", slowly_varying_json(L_)}};
  return j.dump();
}

TailIndexFunction TailIndexFunction::deserialize(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
    return TailIndexFunction(j.at("alpha").get<double>(), slowly_varying_from_json(j.at("L")));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("tail index function: ") + e.what());
  }
}

std::uint64_t TailIndexFunction::content_hash() const { return fnv1a64(serialize()); }

double eval_A(const TailIndexFunction& A, double x) {
  if (x < 0.0) throw DomainError("eval_A requires x >= 0");
  return A(x);
}

double inverse_A(const TailIndexFunction& A, double y) { return A.inverse(y); }

double eval_Lstar(const TailIndexFunction& A, double x) {
  if (!(x >= 1.0)) throw DomainError("L* is defined for x >= 1");
  return A.slowly_varying().sup_between(1.0, x);
}

LStarCache::LStarCache(SlowlyVarying L, double x_max, int depth) : L_(std::move(L)), depth_(depth) {
  if (depth < 1) throw ConfigError("L* cache depth must be positive");
  if (!(x_max >= 1.0)) throw DomainError("L* cache needs x_max >= 1");
  grid_.push_back(1.0);
  values_.push_back(L_(1.0));
  for (int i = 1;; ++i) {
    const double x = std::exp2(static_cast<double>(i) / depth_);
    if (x > x_max * (1 + 1e-15)) break;
    values_.push_back(std::max(values_.back(), L_.sup_between(grid_.back(), x)));
    grid_.push_back(x);
  }
}

double LStarCache::operator()(double x) const {
  if (!(x >= 1.0)) throw DomainError("L* is defined for x >= 1");
  auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - grid_.begin()) - 1;
  return std::max(values_[i], L_.sup_between(grid_[i], x));
}

PotterReport potter_check(const TailIndexFunction& A, double rho, double x, double eps, double cap) {
  if (!(rho > 0.0 && rho <= 1.0)) throw DomainError("potter_check: rho must lie in (0,1]");
  if (!(eps > 0.0)) throw DomainError("potter_check: eps must be positive");
  if (rho * x < 1.0) throw DomainError("potter_check: rho * x must be at least 1");
  PotterReport r;
  r.ratio = std::exp(A.log_value(rho * x) - A.log_value(x));
  const double a = A.alpha();
  r.lower_bound = std::pow(rho, a + eps) / cap;
  r.upper_bound = cap * std::pow(rho, a - eps);
  r.lower_ok = r.ratio >= r.lower_bound;
  r.upper_ok = r.ratio <= r.upper_bound;
  return r;
}

double karamata_partial_sum_check(double zeta, const SlowlyVarying& L, std::int64_t t) {
  if (!(zeta > -1.0)) throw DomainError("karamata check requires zeta > -1");
  if (t < 10) throw DomainError("karamata check requires t >= 10");
  long double sum = 0.0L;
  for (std::int64_t n = 1; n <= t; ++n) {
    const double nd = static_cast<double>(n);
    sum += static_cast<long double>(std::pow(nd, zeta) * L(nd));
  }
  const double td = static_cast<double>(t);
  const long double denom = static_cast<long double>(std::pow(td, zeta + 1.0) * L(td) / (zeta + 1.0));
  return static_cast<double>(sum / denom);
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

}  // namespace srtlab
