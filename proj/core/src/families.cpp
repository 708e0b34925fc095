#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <json.hpp>

#include "srtlab/criteria.hpp"
#include "srtlab/errors.hpp"
#include "srtlab/lattice_law.hpp"

namespace srtlab {

using nlohmann::json;

namespace {

json a_json(const TailIndexFunction& A) { return json::parse(A.serialize()); }

std::string dump(const json& j) { return j.dump(); }

// Integer step count m with h = 1/m; rejects spans that are not reciprocals of integers.
std::int64_t reciprocal_steps(double h) {
  if (!(h > 0.0 && h <= 1.0)) throw ConfigError("grid_h must lie in (0, 1]");
  const double m = std::round(1.0 / h);
  if (std::fabs(m * h - 1.0) > 1e-12) throw ConfigError("grid_h must be 1/m for an integer m");
  return static_cast<std::int64_t>(m);
}

}  // namespace

LatticeLaw make_pareto_lattice(const TailIndexFunction& A, double h, std::int64_t table_len) {
  if (table_len < 2) throw ConfigError("table_len must be at least 2");
  auto tail = std::make_shared<ParetoTail>(A, h);
  std::vector<double> table(static_cast<std::size_t>(table_len) + 1, 0.0);
  for (std::int64_t k = 1; k <= table_len; ++k) table[static_cast<std::size_t>(k)] = tail->mass(k);
  json spec = {{"family", "pareto"}, {"A", a_json(A)}, {"h", h}, {"table_len", table_len}};
  return LatticeLaw::Builder(h)
      .table(0, std::move(table))
      .right_tail(1.0, tail)
      .tail_index(A)
      .tail_constants(1.0, 0.0)
      .family("pareto", dump(spec))
      .build();
}

// ---------------------------------------------------------------------------

UaoSpec uao_preset_spec(double alpha, int n_max) {
  if (n_max < 3) throw ConfigError("uao preset needs n_max >= 3");
  TailIndexFunction A(alpha, SlowlyVarying::reciprocal_log());
  const SlowlyVarying& L = A.slowly_varying();
  UaoSpec spec{A, {}, {}};
  for (int n = 1; n <= n_max; ++n) {
    spec.z_seq.push_back(std::exp2(n) - 1.0);
    spec.eps_seq.push_back(L(std::exp2(n)) / L(1.0));
  }
  return spec;
}

UaoLaw make_uao_family(const UaoSpec& spec) {
  const TailIndexFunction& A = spec.A;
  if (spec.z_seq.size() != spec.eps_seq.size()) throw ConfigError("z_seq and eps_seq differ in length");
  for (std::size_t i = 0; i < spec.z_seq.size(); ++i) {
    const double z = spec.z_seq[i];
    if (!(z >= 1.0) || z != std::floor(z)) throw ConfigError("z_seq entries must be positive integers");
    if (i > 0 && !(z > spec.z_seq[i - 1])) throw ConfigError("z_seq must be increasing");
    if (!(spec.eps_seq[i] > 0.0)) throw ConfigError("eps_seq entries must be positive");
  }

  auto density = std::make_shared<DensityTail>(A, 1);
  std::int64_t n0 = 1;
  while (density->sum_above(n0) >= 1.0) ++n0;
  const double c1 = density->sum_above(n0);

  UaoLaw out{LatticeLaw::Builder(1.0).table(0, {1.0}).build(), n0, c1, 0.0, {}, {}};

  double z_max = 0.0;
  if (!spec.z_seq.empty()) {
    auto weight = [&](std::size_t i) { return spec.eps_seq[i] / A(spec.z_seq[i]); };
    out.selected.push_back(0);
    for (std::size_t i = 1; i < spec.z_seq.size(); ++i)
      if (weight(i) <= 0.5 * weight(out.selected.back())) out.selected.push_back(i);
    if (out.selected.size() < 3)
      throw ConfigError("spike subsequence selection stalled: fewer than 3 indices satisfy the halving rule");
    double total = 0.0;
    for (std::size_t i : out.selected) total += weight(i);
    out.c2 = 1.0 / total;
    for (std::size_t i : out.selected) out.spike_weight.push_back(weight(i));
    z_max = spec.z_seq[out.selected.back()];
  }

  const std::int64_t table_len = kDefaultTableLength;
  std::vector<double> table(static_cast<std::size_t>(table_len) + 1, 0.0);
  table[static_cast<std::size_t>(n0)] = 0.5 * (1.0 - c1);
  for (std::int64_t n = n0 + 1; n <= table_len; ++n) table[static_cast<std::size_t>(n)] = 0.5 * density->g(n);

  json spec_json = {{"family", "uao"}, {"A", a_json(A)}, {"z", spec.z_seq}, {"eps", spec.eps_seq}};
  LatticeLaw::Builder b(1.0);
  b.table(0, std::move(table))
      .right_tail(0.5, density)
      .tail_index(A)
      .tail_constants(1.0, 0.0)
      .family("uao", dump(spec_json));
  for (std::size_t j = 0; j < out.selected.size(); ++j)
    b.atom(static_cast<std::int64_t>(spec.z_seq[out.selected[j]]), 0.5 * out.c2 * out.spike_weight[j]);
  const double x_lo = std::max(std::exp2(44.0), 10.0 * z_max);
  b.tail_window(TailWindow{x_lo, 100.0 * x_lo, 3});
  out.law = b.build();
  return out;
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::size_t kMaxClusterAtoms = std::size_t{1} << 22;

struct ClusterRule {
  double alpha;
  TailIndexFunction A;
  std::function<double(int)> z;             // z_k
  std::function<std::int64_t(double)> count;  // hat k_n from x_n
  std::function<double(double)> weight;     // unnormalized F2 mass at y
  std::function<double(double)> bound;      // d_n from x_n
};

CounterexampleLaw build_counterexample(const ClusterRule& rule, CounterexampleSpec spec, json spec_json) {
  const double h = spec.grid_h;
  const std::int64_t m = reciprocal_steps(h);
  const TailIndexFunction& A = rule.A;

  // symmetric F1 on the integers, lattice index n*m
  auto density = std::make_shared<DensityTail>(A, m);
  std::int64_t n0 = 1;
  while (density->sum_above(n0) >= 0.5) ++n0;
  const double c1 = 0.5 - density->sum_above(n0);

  CounterexampleLaw out{LatticeLaw::Builder(h).table(0, {1.0}).build(), spec, {}, n0, c1, 0.0, 0.0,
                        std::numeric_limits<double>::infinity(), nullptr, nullptr};

  // clusters E_n for n = 1..n_max, truncated to the atom cap
  std::size_t atoms = 0;
  double weight_total = 0.0;
  for (int n = 1; n <= spec.n_max; ++n) {
    const double xn = std::exp2(n);
    const std::int64_t kh = rule.count(xn);
    if (atoms + static_cast<std::size_t>(std::max<std::int64_t>(kh, 0)) > kMaxClusterAtoms) break;
    Cluster c;
    c.n = n;
    c.x_n = xn;
    c.bound = rule.bound(xn);
    double prev = -1.0;
    for (std::int64_t k = 0; k < kh; ++k) {
      const double y = xn + rule.z(static_cast<int>(k));
      if (prev >= 0.0) out.min_gap = std::min(out.min_gap, y - prev);
      prev = y;
      const std::int64_t idx = static_cast<std::int64_t>(std::llround(y / h));
      out.max_rounding = std::max(out.max_rounding, std::fabs(static_cast<double>(idx) * h - y));
      c.index.push_back(idx);
      c.mass.push_back(rule.weight(y));
      weight_total += c.mass.back();
    }
    atoms += c.index.size();
    out.clusters.push_back(std::move(c));
  }
  if (out.clusters.empty()) throw ConfigError("no cluster could be built");
  if (h > out.min_gap)
    throw ConfigError("grid_h " + std::to_string(h) + " is coarser than the minimal cluster gap " +
                      std::to_string(out.min_gap));
  out.c2 = 1.0 / weight_total;
  for (auto& c : out.clusters)
    for (double& v : c.mass) v *= out.c2;
  out.spec.n_max = out.clusters.back().n;

  const std::int64_t T = kDefaultTableLength;
  auto f1_at = [&](std::int64_t k) -> double {
    if (k % m != 0) return 0.0;
    const std::int64_t n = std::llabs(k / m);
    if (n == n0) return c1;
    return n > n0 ? density->g(n) : 0.0;
  };
  std::vector<double> f1(static_cast<std::size_t>(2 * T + 1));
  for (std::int64_t k = -T; k <= T; ++k) f1[static_cast<std::size_t>(k + T)] = f1_at(k);

  const double last_x = std::exp2(out.spec.n_max + 1);
  const TailWindow window{4.0 * last_x, 1024.0 * last_x, 4};

  json j1 = spec_json;
  j1["part"] = "symmetric";
  out.symmetric_part = std::make_shared<const LatticeLaw>(LatticeLaw::Builder(h)
                                                              .table(-T, f1)
                                                              .right_tail(1.0, density)
                                                              .left_tail(1.0, density)
                                                              .tail_index(A)
                                                              .tail_constants(2.0, 2.0)
                                                              .tail_window(window)
                                                              .family("symmetric", dump(j1))
                                                              .build());
  json j2 = spec_json;
  j2["part"] = "clusters";
  LatticeLaw::Builder b2(h);
  b2.table(0, std::vector<double>(static_cast<std::size_t>(T) + 1, 0.0)).family("clusters", dump(j2));
  for (const auto& c : out.clusters)
    for (std::size_t i = 0; i < c.index.size(); ++i) b2.atom(c.index[i], c.mass[i]);
  b2.normalization_tolerance(1e-11);
  out.cluster_part = std::make_shared<const LatticeLaw>(b2.build());

  std::vector<double> half(f1.size());
  for (std::size_t i = 0; i < f1.size(); ++i) half[i] = 0.5 * f1[i];
  LatticeLaw::Builder b(h);
  b.table(-T, std::move(half))
      .right_tail(0.5, density)
      .left_tail(0.5, density)
      .tail_index(A)
      .tail_constants(1.0, 1.0)
      .tail_window(window)
      .component(0.5, out.symmetric_part)
      .component(0.5, out.cluster_part)
      .normalization_tolerance(1e-11)
      .family(spec.family == CounterexampleFamily::two_sided_half ? "half" : "twosided", dump(spec_json));
  for (const auto& c : out.clusters)
    for (std::size_t i = 0; i < c.index.size(); ++i) b.atom(c.index[i], 0.5 * c.mass[i]);
  out.law = b.build();
  return out;
}

}  // namespace

CounterexampleLaw make_twosided_counterexample(double alpha, double grid_h, int n_max) {
  if (!(alpha > 0.0 && alpha < 0.5)) throw ConfigError("two-sided counterexample needs 0 < alpha < 1/2");
  const double p = 1.0 / (1.0 - 2.0 * alpha);
  ClusterRule rule{alpha,
                   TailIndexFunction(alpha, SlowlyVarying::constant()),
                   [p](int k) { return std::pow(static_cast<double>(k), p); },
                   [alpha](double xn) { return static_cast<std::int64_t>(std::floor(std::pow(xn, 1.0 - 2.0 * alpha))); },
                   [alpha](double y) { return 1.0 / (std::pow(y, 1.0 - alpha) * std::sqrt(std::log(y))); },
                   [alpha](double xn) { return 2.0 / (std::pow(xn, alpha) * std::sqrt(std::log(xn))); }};
  CounterexampleSpec spec{CounterexampleFamily::two_sided_sub_half, alpha, grid_h, n_max > 0 ? n_max : 30};
  json j = {{"family", "twosided"}, {"alpha", alpha}, {"grid_h", grid_h}, {"n_max", spec.n_max}};
  return build_counterexample(rule, spec, j);
}

CounterexampleLaw make_half_counterexample(double grid_h, int n_max) {
  ClusterRule rule{0.5,
                   TailIndexFunction(0.5, SlowlyVarying::reciprocal_log()),
                   [](int k) { return std::expm1(std::sqrt(static_cast<double>(k))); },
                   [](double xn) {
                     const auto f = static_cast<std::int64_t>(std::floor(std::log1p(xn)));
                     return f * f;
                   },
                   [](double y) {
                     const double l = std::log1p(y);
                     return 1.0 / (std::sqrt(y) * l * std::sqrt(std::log(l)));
                   },
                   [](double xn) {
                     const double l = std::log1p(xn);
                     return 2.0 * l / (std::sqrt(xn) * std::sqrt(std::log(l)));
                   }};
  CounterexampleSpec spec{CounterexampleFamily::two_sided_half, 0.5, grid_h, n_max > 0 ? n_max : 40};
  json j = {{"family", "half"}, {"grid_h", grid_h}, {"n_max", spec.n_max}};
  return build_counterexample(rule, spec, j);
}

// ---------------------------------------------------------------------------

SmoothLaw make_smooth_family(double alpha, double eps, double h) {
  if (!(alpha > 0.0 && alpha <= 0.5)) throw ConfigError("smooth family needs 0 < alpha <= 1/2");
  if (!(eps > 0.0 && eps < 2.0 * alpha))
    throw ConfigError("smooth family needs 0 < eps < 2 alpha (exponent 1 - 2 alpha + eps would reach 1)");
  TailIndexFunction A(alpha, SlowlyVarying::constant());
  LatticeLaw base = make_pareto_lattice(A, h);
  json spec = {{"family", "smooth"}, {"alpha", alpha}, {"eps", eps}, {"h", h}};
  LatticeLaw::Builder b(h);
  std::vector<double> table(base.table().begin(), base.table().end());
  b.table(base.table_lo(), std::move(table))
      .right_tail(1.0, std::make_shared<ParetoTail>(A, h))
      .tail_index(A)
      .tail_constants(1.0, 0.0)
      .family("smooth", dump(spec));
  SmoothLaw out{b.build(), eps, 1.0 - 2.0 * alpha + eps, 0.0, 0.0};

  std::vector<double> xs;
  for (int e = 10; e <= 16; ++e) xs.push_back(std::exp2(e));
  const SmoothnessReport rep = smoothness_exponent(out.law, xs, eps);
  out.fitted_exponent = rep.fitted_exponent;
  out.witnessed_C = rep.witnessed_C;
  if (rep.inconclusive || !rep.certified)
    throw InvariantError("smoothness certification failed at x = " + std::to_string(rep.worst_x) +
                         ", s = " + std::to_string(rep.worst_s) + " (fitted exponent " +
                         std::to_string(rep.fitted_exponent) + ")");
  return out;
}

}  // namespace srtlab
