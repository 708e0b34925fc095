#include "srtlab/criteria.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "parallel.hpp"
#include "srtlab/errors.hpp"

namespace srtlab {

namespace {

constexpr std::int64_t kChunk = std::int64_t{1} << 20;

bool pure_power(const TailIndexFunction& A) {
  return A.slowly_varying().kind() == SlowKind::constant && A.shift() == 0.0;
}

bool is_half(double alpha) { return std::fabs(alpha - 0.5) < 1e-12; }

// Primitive of A(s)^2 / s^2 = s^(2 alpha - 2) for pure power A and s >= 1.
double power_primitive(double alpha, double s) {
  if (is_half(alpha)) return std::log(s);
  return std::pow(s, 2.0 * alpha - 1.0) / (2.0 * alpha - 1.0);
}

double cell_weight(const TailIndexFunction& A, double lo, double hi) {
  if (!(hi > lo)) return 0.0;
  if (pure_power(A)) return power_primitive(A.alpha(), hi) - power_primitive(A.alpha(), lo);
  // 8-point Gauss-Legendre
  static constexpr std::array<double, 4> node{0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                                              0.9602898564975363};
  static constexpr std::array<double, 4> weight{0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                                                0.1012285362903763};
  const double c = 0.5 * (lo + hi);
  const double r = 0.5 * (hi - lo);
  double s = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    for (double sign : {-1.0, 1.0}) {
      const double t = c + sign * r * node[i];
      const double a = A(t);
      s += weight[i] * a * a / (t * t);
    }
  }
  return r * s;
}

std::int64_t first_cell_at_one(double h) { return static_cast<std::int64_t>(std::floor(1.0 / h * (1.0 + 1e-12))); }
std::int64_t first_point_at_one(double h) { return static_cast<std::int64_t>(std::ceil(1.0 / h * (1.0 - 1e-12))); }
// largest j with j h < y
std::int64_t last_below(double y, double h) { return static_cast<std::int64_t>(std::ceil(y / h - 1e-9)) - 1; }

enum class WeightKind { density, interval };

// Per-(A, h) weights: A(jh)^2/(jh) at lattice points, or the full-cell integrals
// of A(s)^2/s^2 over [max(1, jh), (j+1)h].
class WeightCache {
 public:
  std::shared_ptr<const std::vector<double>> get(const TailIndexFunction& A, double h, WeightKind kind,
                                                 std::int64_t j_max) {
    const auto key = std::make_tuple(A.content_hash(), h, static_cast<int>(kind));
    std::lock_guard lock(mu_);
    auto it = map_.find(key);
    if (it != map_.end() && static_cast<std::int64_t>(it->second->size()) > j_max) return it->second;
    if (map_.size() > 16) map_.clear();
    const std::int64_t old = it == map_.end() ? 0 : static_cast<std::int64_t>(it->second->size());
    const std::int64_t len = std::max(j_max + 1, 2 * old);
    auto v = std::make_shared<std::vector<double>>(static_cast<std::size_t>(len), 0.0);
    if (kind == WeightKind::density) {
      for (std::int64_t j = first_point_at_one(h); j < len; ++j) {
        const double s = static_cast<double>(j) * h;
        const double a = A(s);
        (*v)[static_cast<std::size_t>(j)] = a * a / s;
      }
    } else {
      for (std::int64_t j = first_cell_at_one(h); j < len; ++j)
        (*v)[static_cast<std::size_t>(j)] =
            cell_weight(A, std::max(1.0, static_cast<double>(j) * h), static_cast<double>(j + 1) * h);
    }
    map_[key] = v;
    return v;
  }

 private:
  std::mutex mu_;
  std::map<std::tuple<std::uint64_t, double, int>, std::shared_ptr<const std::vector<double>>> map_;
};

WeightCache& weight_cache() {
  static WeightCache cache;
  return cache;
}

void check_eta(double eta) {
  if (!(eta > 0.0 && eta < 1.0)) throw ConfigError("eta must lie in (0,1)");
}

// Calls visit(k, r(k h)) for k = k_hi down to k_lo >= 1, accumulating the survival downward.
template <class Visit>
void scan_r_down(const LatticeLaw& F, std::int64_t k_lo, std::int64_t k_hi, Visit&& visit) {
  if (k_hi < k_lo) return;
  const double h = F.h();
  long double surv = F.survival(k_hi);
  for (std::int64_t top = k_hi; top >= k_lo; top -= kChunk) {
    const std::int64_t bot = std::max(k_lo, top - kChunk + 1);
    const std::vector<double> f = F.pmf_range(bot, top);
    for (std::int64_t k = top; k >= bot; --k) {
      const double m = f[static_cast<std::size_t>(k - bot)];
      if (surv <= 0.0L) {
        if (m > 0.0) throw DomainError("r is infinite at the top of the support");
        visit(k, 0.0);
      } else {
        visit(k, static_cast<double>(m * static_cast<double>(k) * h / surv));
      }
      surv += m;
    }
  }
}

}  // namespace

double r_func(const LatticeLaw& F, double x) {
  if (x < F.h() * (1.0 - 1e-12)) throw DomainError("r needs x >= h");
  const std::int64_t k = F.index_of(x);
  const double surv = F.survival(k);
  if (!(surv > 0.0)) throw DomainError("F((x, inf)) = 0: query beyond the support");
  return F.pmf(k) * x / surv;
}

double R_T(const LatticeLaw& F, double a, double b, double T) {
  if (a > b) throw ConfigError("R_T needs a <= b");
  if (T < 0.0) throw ConfigError("R_T needs T >= 0");
  const double h = F.h();
  const std::int64_t k_lo = std::max<std::int64_t>(1, F.floor_index(a) + 1);
  const std::int64_t k_hi = static_cast<std::int64_t>(std::ceil(b / h - 1e-9));
  long double sum = 0.0L;
  scan_r_down(F, k_lo, k_hi, [&](std::int64_t k, double r) {
    if (r <= T) return;
    const double overlap = std::min(b, static_cast<double>(k) * h) - std::max(a, static_cast<double>(k - 1) * h);
    if (overlap > 0.0) sum += static_cast<long double>(overlap) * (r - T);
  });
  return static_cast<double>(sum);
}

DoneySup doney_sup(const LatticeLaw& F, double x_max) {
  DoneySup out;
  const std::int64_t k_hi = F.floor_index(x_max);
  scan_r_down(F, 1, k_hi, [&](std::int64_t k, double r) {
    if (r >= out.sup) {
      out.sup = r;
      out.argmax = static_cast<double>(k) * F.h();
    }
  });
  return out;
}

double chi_u(const TailIndexFunction& A, double x) {
  if (x < 1.0) throw DomainError("chi_u needs x >= 1");
  if (x == 1.0) return 0.0;
  if (pure_power(A)) return power_primitive(A.alpha(), x) - power_primitive(A.alpha(), 1.0);
  // s = e^t
  auto f = [&](double t) {
    const double a = A(std::exp(t));
    return a * a * std::exp(-t);
  };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, std::log(x), 20, 1e-11);
}

double chi_diag(const LatticeLaw& F, double eta, double x, double T) {
  check_eta(eta);
  const TailIndexFunction& A = F.A();
  const double ax = A(x);
  double v = R_T(F, (1.0 - eta) * x, x, T) / (ax * ax);
  if (is_half(A.alpha())) v *= chi_u(A, x);
  return v;
}

namespace {

double density_sum(const LatticeLaw& F, double eta, double x, bool mirrored) {
  check_eta(eta);
  const TailIndexFunction& A = F.A();
  const double h = F.h();
  const std::int64_t kx = F.index_of(x);
  const std::int64_t j1 = first_point_at_one(h);
  const std::int64_t j2 = last_below(eta * x, h);
  if (j2 < j1) return 0.0;
  const auto w = weight_cache().get(A, h, WeightKind::density, j2);
  long double sum = 0.0L;
  const std::vector<double> below = F.pmf_range(kx - j2, kx - j1);
  for (std::int64_t j = j1; j <= j2; ++j) sum += (*w)[static_cast<std::size_t>(j)] * below[static_cast<std::size_t>(kx - j - (kx - j2))];
  if (mirrored) {
    const std::vector<double> above = F.pmf_range(kx + j1, kx + j2);
    for (std::int64_t j = j1; j <= j2; ++j) sum += (*w)[static_cast<std::size_t>(j)] * above[static_cast<std::size_t>(j - j1)];
  }
  return x / A(x) * static_cast<double>(sum);
}

}  // namespace

double ns_diag_density(const LatticeLaw& F, double eta, double x) { return density_sum(F, eta, x, false); }

double ns_diag_twosided(const LatticeLaw& F, double eta, double x) { return density_sum(F, eta, x, F.q() > 0.0); }

double ns_diag_interval(const LatticeLaw& F, double eta, double x) {
  check_eta(eta);
  const TailIndexFunction& A = F.A();
  const double h = F.h();
  const double top = eta * x;
  if (top <= 1.0) return 0.0;
  const std::int64_t kx = F.index_of(x);
  const std::int64_t j0 = first_cell_at_one(h);
  const std::int64_t jE = last_below(top, h);
  if (jE < j0) return 0.0;
  const auto w = weight_cache().get(A, h, WeightKind::interval, jE);
  const std::vector<double> f = F.pmf_range(kx - jE, kx);  // f[jE - i] = f(kx - i)
  long double G = 0.0L;
  long double sum = 0.0L;
  for (std::int64_t j = 0; j <= jE; ++j) {
    G += f[static_cast<std::size_t>(jE - j)];
    if (j < j0) continue;
    const double upper = static_cast<double>(j + 1) * h;
    const double wj = upper <= top ? (*w)[static_cast<std::size_t>(j)]
                                   : cell_weight(A, std::max(1.0, static_cast<double>(j) * h), top);
    sum += G * wj;
  }
  return x / A(x) * static_cast<double>(sum);
}

HalfConditionReport half_condition(const TailIndexFunction& A, double x_max) {
  if (!is_half(A.alpha())) throw ConfigError("half_condition needs alpha = 1/2");
  if (!(x_max >= 2.0)) throw ConfigError("half_condition needs x_max >= 2");
  const SlowlyVarying& L = A.slowly_varying();
  HalfConditionReport rep;
  for (int i = 1; std::exp2(i) <= x_max * (1.0 + 1e-12); ++i) {
    const double x = std::exp2(i);
    const double r = L.sup_between(1.0, x) / L(x);
    rep.x.push_back(x);
    rep.ratio.push_back(r);
    if (r > rep.sup) {
      rep.sup = r;
      rep.witnessed_x = x;
    }
  }
  if (rep.x.size() >= 3) {
    CriterionGrid g;
    g.criterion = "half";
    g.eta = {1.0};
    g.x = rep.x;
    g.Q = {rep.ratio};
    rep.growth = classify_trend(g);
  }
  rep.holds_on_range = rep.growth == Trend::bounded || rep.growth == Trend::vanishing;
  return rep;
}

std::vector<double> dyadic_s_rule(double x) {
  std::vector<double> s;
  for (double v = 1.0; v * v <= x; v *= 2.0) s.push_back(v);
  return s;
}

SmoothnessReport smoothness_exponent(const LatticeLaw& F, std::span<const double> x_list, double eps,
                                     const SRule& s_rule) {
  const double alpha = F.A().alpha();
  if (alpha > 0.5 + 1e-12) throw ConfigError("smoothness_exponent needs alpha <= 1/2");
  if (!(eps > 0.0)) throw ConfigError("eps must be positive");
  SmoothnessReport rep;
  rep.target_exponent = 1.0 - 2.0 * alpha + eps;
  std::vector<double> lx, ly, xs, ss;
  for (double x : x_list) {
    const double surv = mass_interval(F, x, std::numeric_limits<double>::infinity());
    if (!(surv > 0.0)) continue;
    if (mass_interval(F, x, 2.0 * x) / surv > 1.0 + 1e-12) rep.anchor_ok = false;
    for (double s : s_rule(x)) {
      const double ratio = mass_interval(F, x, x + s) / surv;
      const double t = s / x;
      const double c = ratio / std::pow(t, rep.target_exponent);
      if (c > rep.witnessed_C) {
        rep.witnessed_C = c;
        rep.worst_x = x;
        rep.worst_s = s;
      }
      if (ratio > 0.0) {
        lx.push_back(std::log(t));
        ly.push_back(std::log(ratio));
        xs.push_back(x);
        ss.push_back(s);
      }
    }
  }
  rep.points = lx.size();
  if (rep.points < 3) {
    rep.inconclusive = true;
    return rep;
  }
  const LinearFit fit = ols(lx, ly);
  rep.fitted_exponent = fit.slope;
  rep.r_squared = fit.r_squared;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double res = std::fabs(ly[i] - (fit.intercept + fit.slope * lx[i]));
    if (res > rep.max_residual) rep.max_residual = res;
  }
  rep.residual_flag = rep.max_residual > 1.0;
  rep.certified = rep.fitted_exponent >= rep.target_exponent && !rep.residual_flag && rep.anchor_ok;
  return rep;
}

std::string_view to_string(CriterionKind k) {
  switch (k) {
    case CriterionKind::doney: return "doney";
    case CriterionKind::chi: return "chi";
    case CriterionKind::ns_density: return "ns-density";
    case CriterionKind::ns_interval: return "ns-interval";
    case CriterionKind::ns_twosided: return "ns-twosided";
  }
  return "unknown";
}

CriterionKind criterion_kind_from_string(std::string_view s) {
  if (s == "doney") return CriterionKind::doney;
  if (s == "chi") return CriterionKind::chi;
  if (s == "ns-density") return CriterionKind::ns_density;
  if (s == "ns-interval") return CriterionKind::ns_interval;
  if (s == "ns-twosided") return CriterionKind::ns_twosided;
  throw ConfigError("unknown criterion '" + std::string(s) + "'");
}

std::vector<double> default_eta_list() { return {0.4, 0.2, 0.1, 0.05}; }

std::vector<double> default_x_list() {
  std::vector<double> x;
  for (int e = 12; e <= 22; ++e) x.push_back(std::exp2(e));
  return x;
}

CriterionGrid evaluate_grid(const LatticeLaw& F, CriterionKind kind, std::span<const double> eta_list,
                            std::span<const double> x_list, const GridOptions& options) {
  if (x_list.size() < 3) throw ConfigError("a criterion grid needs at least 3 x points");
  if (!std::is_sorted(x_list.begin(), x_list.end())) throw ConfigError("x list must be increasing");
  CriterionGrid g;
  g.criterion = std::string(to_string(kind));
  g.x.assign(x_list.begin(), x_list.end());
  if (kind == CriterionKind::doney) {
    g.eta = {1.0};
  } else {
    if (eta_list.empty()) throw ConfigError("eta list must be nonempty");
    g.eta.assign(eta_list.begin(), eta_list.end());
    if (!std::is_sorted(g.eta.rbegin(), g.eta.rend())) throw ConfigError("eta list must be decreasing");
    for (double e : g.eta) check_eta(e);
  }
  if (kind == CriterionKind::chi) g.T = options.T;
  for (double x : g.x) F.index_of(x);

  const double reach = g.eta.front() * g.x.back();
  if (kind == CriterionKind::ns_density || kind == CriterionKind::ns_twosided)
    weight_cache().get(F.A(), F.h(), WeightKind::density, std::max<std::int64_t>(0, last_below(reach, F.h())));
  if (kind == CriterionKind::ns_interval)
    weight_cache().get(F.A(), F.h(), WeightKind::interval, std::max<std::int64_t>(0, last_below(reach, F.h())));

  const std::size_t ne = g.eta.size();
  const std::size_t nx = g.x.size();
  g.Q.assign(ne, std::vector<double>(nx, 0.0));
  detail::parallel_for(ne * nx, options.threads, [&](std::size_t idx) {
    const std::size_t i = idx / nx;
    const std::size_t j = idx % nx;
    const double eta = g.eta[i];
    const double x = g.x[j];
    double v = 0.0;
    switch (kind) {
      case CriterionKind::doney: v = doney_sup(F, x).sup; break;
      case CriterionKind::chi: v = chi_diag(F, eta, x, options.T); break;
      case CriterionKind::ns_density: v = ns_diag_density(F, eta, x); break;
      case CriterionKind::ns_interval: v = ns_diag_interval(F, eta, x); break;
      case CriterionKind::ns_twosided: v = ns_diag_twosided(F, eta, x); break;
    }
    g.Q[i][j] = std::max(v, 0.0);
  });
  annotate_trend(g);
  return g;
}

}  // namespace srtlab
