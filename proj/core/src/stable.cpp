#include "srtlab/stable.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "srtlab/errors.hpp"
#include "srtlab/renewal.hpp"

namespace srtlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// log of the Zolotarev kernel A(u) = sin(a u)^(a/(1-a)) sin((1-a) u) / sin(u)^(1/(1-a))
double zolotarev_log(double a, double u) {
  return a / (1.0 - a) * std::log(std::sin(a * u)) + std::log(std::sin((1.0 - a) * u)) -
         std::log(std::sin(u)) / (1.0 - a);
}

}  // namespace

StableDensity::StableDensity(double alpha, double p, double q) : alpha_(alpha), p_(p), q_(q) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("stable index must lie in (0,1)");
  if (!(p >= 0.0 && q >= 0.0 && p + q > 0.0)) throw ConfigError("stable tail weights need p, q >= 0 and p + q > 0");
  scale_ = std::pow(p_ * std::tgamma(1.0 - alpha_), 1.0 / alpha_);

  if (one_sided()) {
    double y = 1e4;
    crossover_ = y;
    for (int i = 0; i < 400; ++i) {
      double cancel = 0.0;
      const double v = standard_series(y, &cancel);
      if (!std::isfinite(v) || v <= 0.0 || cancel > 1e3) break;
      crossover_ = y;
      y /= std::exp2(0.125);
    }
  }

  // coarse log-grid scan, then golden-section refinement
  const double base = one_sided() ? scale_ : std::pow((p_ + q_) * std::tgamma(1.0 - alpha_), 1.0 / alpha_);
  double best_x = base;
  double best_v = -1.0;
  std::vector<double> grid;
  for (int i = -160; i <= 160; ++i) grid.push_back(base * std::exp2(i / 16.0));
  if (!one_sided()) {
    const std::size_t m = grid.size();
    for (std::size_t i = 0; i < m; ++i) grid.push_back(-grid[i]);
    grid.push_back(0.0);
  }
  std::sort(grid.begin(), grid.end());
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = (*this)(grid[i]);
    if (v > best_v) {
      best_v = v;
      best_x = grid[i];
      best_i = i;
    }
  }
  double a = grid[best_i > 0 ? best_i - 1 : 0];
  double b = grid[std::min(best_i + 1, grid.size() - 1)];
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = (*this)(c), fd = (*this)(d);
  for (int it = 0; it < 80 && b - a > 1e-12 * std::max(1.0, std::fabs(best_x)); ++it) {
    if (fc > fd) {
      b = d; d = c; fd = fc;
      c = b - g * (b - a); fc = (*this)(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + g * (b - a); fd = (*this)(d);
    }
  }
  argmax_ = 0.5 * (a + b);
  sup_ = std::max(best_v, (*this)(argmax_));
}

double StableDensity::standard_series(double y, double* cancellation) const {
  if (!(y > 0.0)) return kNaN;
  const double ly = std::log(y);
  long double sum = 0.0L;
  double max_term = 0.0;
  double prev_env = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 600; ++k) {
    const double env_log = std::lgamma(k * alpha_ + 1.0) - std::lgamma(k + 1.0) - (k * alpha_ + 1.0) * ly;
    const double env = std::exp(env_log);
    const double s = std::sin(k * kPi * alpha_);
    const double term = (k % 2 == 1 ? 1.0 : -1.0) * s * env;
    sum += term;
    max_term = std::max(max_term, std::fabs(term));
    if (env < 1e-18 * std::fabs(static_cast<double>(sum)) && env < prev_env && k > 2) {
      const double v = static_cast<double>(sum) / kPi;
      if (cancellation) *cancellation = max_term / std::fabs(static_cast<double>(sum));
      return v;
    }
    prev_env = env;
  }
  if (cancellation) *cancellation = std::numeric_limits<double>::infinity();
  return kNaN;
}

double StableDensity::standard_integral(double y) const {
  if (!(y > 0.0)) return 0.0;
  const double a = alpha_;
  const double lc = -a / (1.0 - a) * std::log(y);  // log of y^(-a/(1-a))
  auto f = [&](double u) {
    const double la = zolotarev_log(a, u);
    const double t = std::exp(la + lc);
    if (!std::isfinite(t) || t > 745.0) return 0.0;
    return std::exp(la - t);
  };
  boost::math::quadrature::tanh_sinh<double> integrator;
  const double I = integrator.integrate(f, 0.0, kPi);
  if (!(I > 0.0)) return 0.0;
  return a / (1.0 - a) * std::pow(y, -1.0 / (1.0 - a)) * I / kPi;
}

double StableDensity::standard_cdf_integral(double y) const {
  if (!(y > 0.0)) return 0.0;
  const double a = alpha_;
  const double lc = -a / (1.0 - a) * std::log(y);
  auto f = [&](double u) {
    const double t = std::exp(zolotarev_log(a, u) + lc);
    return std::isfinite(t) ? std::exp(-t) : 0.0;
  };
  boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate(f, 0.0, kPi) / kPi;
}

double StableDensity::series(double x) const {
  if (!one_sided()) return kNaN;
  return standard_series(x / scale_, nullptr) / scale_;
}

double StableDensity::integral(double x) const {
  if (!one_sided()) return kNaN;
  return standard_integral(x / scale_) / scale_;
}

double StableDensity::survival(double x) const {
  if (!one_sided()) throw ConfigError("survival is implemented for one-sided stable laws");
  if (x <= 0.0) return 1.0;
  const double y = x / scale_;
  if (y >= crossover_) {
    const double ly = std::log(y);
    long double sum = 0.0L;
    for (int k = 1; k <= 600; ++k) {
      const double env = std::exp(std::lgamma(k * alpha_) - std::lgamma(k + 1.0) - k * alpha_ * ly);
      sum += (k % 2 == 1 ? 1.0 : -1.0) * std::sin(k * kPi * alpha_) * env;
      if (env < 1e-18 * std::fabs(static_cast<double>(sum)) && k > 2) break;
    }
    return static_cast<double>(sum) / kPi;
  }
  return 1.0 - standard_cdf_integral(y);
}

double StableDensity::cf_inversion(double x) const {
  const double g = std::tgamma(1.0 - alpha_);
  const double c = g * (p_ + q_) * std::cos(kPi * alpha_ / 2.0);
  const double b = g * (p_ - q_) * std::sin(kPi * alpha_ / 2.0);
  auto fc = [&](double t) {
    const double ta = std::pow(t, alpha_);
    return std::exp(-c * ta) * std::cos(b * ta);
  };
  auto fs = [&](double t) {
    const double ta = std::pow(t, alpha_);
    return std::exp(-c * ta) * std::sin(b * ta);
  };
  if (x == 0.0) {
    boost::math::quadrature::exp_sinh<double> integrator;
    return integrator.integrate(fc, 0.0, std::numeric_limits<double>::infinity()) / kPi;
  }
  const double w = std::fabs(x);
  boost::math::quadrature::ooura_fourier_cos<double> cosine(1e-12);
  boost::math::quadrature::ooura_fourier_sin<double> sine(1e-12);
  const double ic = cosine.integrate(fc, w).first;
  const double is = b == 0.0 ? 0.0 : sine.integrate(fs, w).first;
  const double v = (x > 0.0 ? ic + is : ic - is) / kPi;
  return std::max(v, 0.0);
}

double StableDensity::operator()(double x) const {
  if (!one_sided()) return cf_inversion(x);
  if (!(x > 0.0)) return 0.0;
  const double y = x / scale_;
  if (y >= crossover_) {
    const double v = standard_series(y, nullptr);
    if (std::isfinite(v)) return std::max(v, 0.0) / scale_;
  }
  return standard_integral(y) / scale_;
}

double stable_density(const StableDensity& phi, double x) { return phi(x); }

// ---------------------------------------------------------------------------

StableTable::StableTable(const StableDensity& phi, double y_lo, double y_hi, std::size_t points)
    : lo_(y_lo), step_((y_hi - y_lo) / static_cast<double>(points - 1)) {
  if (points < 4 || !(y_hi > y_lo)) throw ConfigError("stable table needs at least 4 points on a proper range");
  values_.resize(points);
  for (std::size_t i = 0; i < points; ++i) values_[i] = phi(lo_ + step_ * static_cast<double>(i));
}

double StableTable::operator()(double y) const {
  const double t = (y - lo_) / step_;
  const auto n = static_cast<std::int64_t>(values_.size());
  if (t < 0.0 || t > static_cast<double>(n - 1)) return 0.0;
  std::int64_t i = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor(t)) - 1, 0, n - 4);
  const double s = t - static_cast<double>(i);
  const double* v = values_.data() + i;
  // Lagrange cubic through nodes 0..3 at position s
  const double l0 = -(s - 1) * (s - 2) * (s - 3) / 6.0;
  const double l1 = s * (s - 2) * (s - 3) / 2.0;
  const double l2 = -s * (s - 1) * (s - 3) / 2.0;
  const double l3 = s * (s - 1) * (s - 2) / 6.0;
  return l0 * v[0] + l1 * v[1] + l2 * v[2] + l3 * v[3];
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::size_t kTablePoints = std::size_t{1} << 15;

LltReport llt_statistic(const WalkPmf& walk, double an, double h, const StableDensity& phi, const StableTable& table,
                        std::int64_t k_lo, std::int64_t k_hi) {
  LltReport rep;
  rep.n = walk.n;
  rep.a_n = an;
  rep.sup_phi = phi.sup();
  for (std::int64_t k = k_lo; k <= k_hi; ++k) {
    const double y = static_cast<double>(k) * h / an;
    const double d = std::fabs(an / h * walk.at(k) - table(y));
    if (d > rep.statistic) {
      rep.statistic = d;
      rep.argmax_x = y;
    }
  }
  return rep;
}

}  // namespace

LltReport llt_error(const LatticeLaw& F, std::int64_t n, double window_scale) {
  if (n < 1) throw ConfigError("llt_error needs n >= 1");
  const TailIndexFunction& A = F.A();
  const double an = A.inverse(static_cast<double>(n));
  const auto reach = static_cast<std::int64_t>(std::ceil(window_scale * an / F.h()));
  const StableDensity phi(A.alpha(), F.p(), F.q());
  const std::int64_t lo = F.one_sided() ? 0 : -reach;
  ErrorLedger ledger;
  const WalkPmf walk = walk_pmf(F, n, Window{lo, reach}, &ledger);
  const double y_lo = F.one_sided() ? 0.0 : -window_scale - 1.0;
  const StableTable table(phi, y_lo, window_scale + 1.0, kTablePoints);
  LltReport rep = llt_statistic(walk, an, F.h(), phi, table, lo, reach);
  rep.ledger = ledger;
  return rep;
}

std::vector<LltReport> llt_error_dyadic(const LatticeLaw& F, std::span<const int> exponents, double window_scale) {
  if (exponents.empty()) return {};
  const TailIndexFunction& A = F.A();
  const int e_max = *std::max_element(exponents.begin(), exponents.end());
  const double a_top = A.inverse(std::exp2(e_max));
  const auto reach_top = static_cast<std::int64_t>(std::ceil(window_scale * a_top / F.h()));
  ErrorLedger ledger;
  const std::vector<WalkPmf> chain = walk_pmf_dyadic(F, e_max, reach_top, &ledger);
  const StableDensity phi(A.alpha(), F.p(), F.q());
  const StableTable table(phi, 0.0, window_scale + 1.0, kTablePoints);
  std::vector<LltReport> out;
  for (int e : exponents) {
    const double an = A.inverse(std::exp2(e));
    const auto reach = static_cast<std::int64_t>(std::ceil(window_scale * an / F.h()));
    LltReport rep = llt_statistic(chain[static_cast<std::size_t>(e)], an, F.h(), phi, table, 0, reach);
    rep.ledger = ledger;
    out.push_back(rep);
  }
  return out;
}

KRegion default_region(const LatticeLaw& F) { return F.q() > 0.0 ? KRegion::symmetric : KRegion::positive; }

double llt_truncated_lower(const LatticeLaw& F, std::int64_t n, double c_mult, KRegion region) {
  if (n < 1) throw ConfigError("llt_truncated_lower needs n >= 1");
  const double an = F.A().inverse(static_cast<double>(n));
  const double h = F.h();
  const auto k1 = static_cast<std::int64_t>(std::ceil(an / h));
  const auto k2 = static_cast<std::int64_t>(std::floor(2.0 * an / h));
  if (k2 < k1) throw DomainError("no lattice point with z / a_n in [1, 2]");
  const Window w = region == KRegion::positive ? Window{0, k2} : Window{-k2, k2};
  const WalkPmf p = restricted_walk_pmf(F, n, c_mult * an, w);
  double inf = std::numeric_limits<double>::infinity();
  for (std::int64_t k = k1; k <= k2; ++k) {
    inf = std::min(inf, p.at(k));
    if (region == KRegion::symmetric) inf = std::min(inf, p.at(-k));
  }
  return an * inf;
}

}  // namespace srtlab
