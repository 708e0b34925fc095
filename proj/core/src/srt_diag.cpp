#include "srtlab/srt_diag.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "srtlab/errors.hpp"
#include "srtlab/stable.hpp"

namespace srtlab {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0,1)");
}

double ipow(double v, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= v;
  return r;
}

std::int64_t n_cut(const TailIndexFunction& A, double delta, double x) {
  if (!(delta > 0.0 && delta <= 1.0)) throw ConfigError("delta must lie in (0, 1]");
  const double a = A(delta * x);
  return a < 1.0 ? 0 : static_cast<std::int64_t>(std::floor(a));
}

}  // namespace

double const_C(double alpha) {
  check_alpha(alpha);
  return std::sin(std::numbers::pi * alpha) / std::numbers::pi;
}

double BigJumpParams::xi(double a_n, double x) const { return std::pow(a_n, gamma) * std::pow(x, 1.0 - gamma); }

BigJumpParams big_jump_params(double alpha) {
  check_alpha(alpha);
  double r = 1.0 / alpha;
  if (std::fabs(r - std::round(r)) < 1e-12 * r) r = std::round(r);
  const double fl = std::floor(r);
  BigJumpParams p;
  p.alpha = alpha;
  p.gamma = alpha / 4.0 * (1.0 - (r - fl));
  p.kappa = static_cast<int>(fl) - 1;
  p.J = (p.kappa + 1) * (1.0 - 2.0 * p.gamma) - r;
  return p;
}

double srt_ratio_raw(double u_mass, double A_over_x, double h, double alpha) {
  return u_mass / (const_C(alpha) * h * A_over_x);
}

double srt_ratio(const LatticeLaw& F, const RenewalTable& table, double x) {
  if (!(x > 0.0)) throw DomainError("srt_ratio needs x > 0");
  const std::int64_t k = F.index_of(x);
  const TailIndexFunction& A = F.A();
  return srt_ratio_raw(table.at(k), A(x) / x, F.h(), A.alpha());
}

double integrated_ratio(const LatticeLaw& F, const RenewalTable& table, double x) {
  if (x < 0.0) throw DomainError("integrated_ratio needs x >= 0");
  const std::int64_t k = F.index_of(x);
  if (k > table.K) throw DomainError("lattice index outside the renewal table");
  const TailIndexFunction& A = F.A();
  return table.U(k) / (const_C(A.alpha()) / A.alpha() * A(x));
}

double riemann_C_delta(double alpha, double delta) {
  check_alpha(alpha);
  if (!(delta > 0.0 && delta <= 1.0)) throw ConfigError("delta must lie in (0, 1]");
  if (delta == 1.0) return 0.0;
  const StableDensity phi(alpha);
  // y = e^t
  auto f = [&](double t) { return std::exp((1.0 - alpha) * t) * phi(std::exp(t)); };
  const double L = -std::log(delta);
  return alpha * boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, -L, L, 15, 1e-11);
}

double lemma41_probe(const LatticeLaw& F, double delta, double x, int ell, int m) {
  const TailIndexFunction& A = F.A();
  const BigJumpParams bp = big_jump_params(A.alpha());
  if (ell < 0 || m < 0) throw ConfigError("ell and m must be nonnegative");
  if (ell + m < bp.kappa + 1) throw ConfigError("lemma41_probe needs ell + m >= kappa + 1");
  const std::int64_t N = n_cut(A, delta, x);
  long double sum = 0.0L;
  for (std::int64_t n = 1; n <= N; ++n) {
    const BigJumpDecomposition d = bigjump_decomposition(F, n, x, std::max(m - 1, 0));
    const double mass = m == 0 ? d.total : d.remainder;
    sum += ipow(static_cast<double>(n), ell) * mass;
  }
  return static_cast<double>(sum) / (ipow(A(x), ell + 1) / x);
}

double lemma42_probe(const LatticeLaw& F, double delta, double x, int ell) {
  const TailIndexFunction& A = F.A();
  const BigJumpParams bp = big_jump_params(A.alpha());
  if (ell < 0) throw ConfigError("ell must be nonnegative");
  const std::int64_t N = n_cut(A, delta, x);
  const double h = F.h();
  const auto z_lo = static_cast<std::int64_t>(std::ceil(std::pow(delta, bp.gamma / 2.0) * x / h - 1e-9));
  const auto z_hi = static_cast<std::int64_t>(std::floor(4.0 * x / h + 1e-9));
  long double sum = 0.0L;
  for (std::int64_t n = 1; n <= N; ++n) {
    const double xi = bp.xi(A.inverse(static_cast<double>(n)), x);
    const WalkPmf p = restricted_walk_pmf(F, n, xi, Window{z_lo, z_hi});
    const double sup = p.values.empty() ? 0.0 : *std::max_element(p.values.begin(), p.values.end());
    sum += ipow(static_cast<double>(n), ell) * sup;
  }
  return static_cast<double>(sum) / (ipow(A(x), ell + 1) / x);
}

Lemma51Fit lemma51_probe(const LatticeLaw& F, std::span<const std::int64_t> n_list, double z) {
  if (z < F.h()) throw DomainError("lemma51_probe needs z >= h");
  if (n_list.empty()) throw ConfigError("lemma51_probe needs a nonempty n list");
  const TailIndexFunction& A = F.A();
  const std::int64_t kz = F.index_of(z);
  const std::int64_t n_max = *std::max_element(n_list.begin(), n_list.end());
  if (*std::min_element(n_list.begin(), n_list.end()) < 1) throw ConfigError("n must be positive");
  const std::vector<double> marg = point_marginals(F, kz, n_max);
  const double Az = A(z);
  Lemma51Fit fit;
  std::vector<double> t, ly;
  for (std::int64_t n : n_list) {
    const double s = A.inverse(static_cast<double>(n)) * marg[static_cast<std::size_t>(n)];
    fit.n.push_back(n);
    fit.scaled.push_back(s);
    if (s > 0.0) {
      t.push_back(static_cast<double>(n) / Az);
      ly.push_back(std::log(s));
    }
  }
  const LinearFit lf = ols(t, ly);
  fit.slope = lf.slope;
  fit.r_squared = lf.r_squared;
  fit.degenerate = t.size() < 2 || !(lf.slope < 0.0);
  fit.c = fit.degenerate ? 0.0 : -lf.slope / 2.0;
  for (std::size_t i = 0; i < fit.n.size(); ++i)
    fit.C = std::max(fit.C, fit.scaled[i] * std::exp(fit.c * static_cast<double>(fit.n[i]) / Az));
  return fit;
}

NecessityReport necessity_probe(const LatticeLaw& F, std::span<const double> x_list, double w, int m_max) {
  const double h = F.h();
  if (w < h) throw ConfigError("necessity_probe needs w >= h");
  if (m_max < 1 || m_max > 3) throw ConfigError("necessity_probe supports m = 1..3");
  const TailIndexFunction& A = F.A();
  NecessityReport rep;
  rep.w = w;
  rep.x.assign(x_list.begin(), x_list.end());
  rep.series.assign(static_cast<std::size_t>(m_max), {});
  for (double x : x_list) {
    const std::int64_t k = F.index_of(x);
    const std::int64_t k_lo = F.floor_index(x - w) + 1;
    const double scale = x / A(x);
    rep.series[0].push_back(scale * mass_interval(F, x - w, x));
    for (int m = 2; m <= m_max; ++m) {
      const WalkPmf p = walk_pmf(F, m, Window{k_lo, k});
      rep.series[static_cast<std::size_t>(m - 1)].push_back(scale * p.total());
    }
  }
  for (const auto& s : rep.series) {
    if (rep.x.size() < 3) {
      rep.trend.push_back(Trend::inconclusive);
      continue;
    }
    CriterionGrid g;
    g.criterion = "necessity";
    g.eta = {1.0};
    g.x = rep.x;
    g.Q = {s};
    rep.trend.push_back(classify_trend(g));
  }
  return rep;
}

}  // namespace srtlab
