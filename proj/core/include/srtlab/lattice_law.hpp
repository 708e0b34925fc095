#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "srtlab/regvar.hpp"

namespace srtlab {

/// Masses of one side of a law beyond its dense table. Indices m >= 1 count
/// lattice steps away from the origin.
class TailModel {
 public:
  virtual ~TailModel() = default;
  virtual double mass(std::int64_t m) const = 0;
  /// sum of mass(j) over j > m.
  virtual double tail_sum(std::int64_t m) const = 0;
  virtual std::string describe() const = 0;
};

/// Exact Pareto-type tail: P(X > m h) = min(1, 1/A(m h)).
class ParetoTail final : public TailModel {
 public:
  ParetoTail(TailIndexFunction A, double h) : A_(std::move(A)), h_(h) {}
  double mass(std::int64_t m) const override;
  double tail_sum(std::int64_t m) const override;
  std::string describe() const override { return "pareto"; }

 private:
  TailIndexFunction A_;
  double h_;
};

/// Density-form tail g(n) = 2 alpha / (n A(n)) placed at lattice index n * stride.
class DensityTail final : public TailModel {
 public:
  DensityTail(TailIndexFunction A, std::int64_t stride = 1);
  double mass(std::int64_t m) const override;
  double tail_sum(std::int64_t m) const override;
  std::string describe() const override { return "density"; }

  double g(std::int64_t n) const;
  /// sum over j > n of g(j), in integer (not lattice) units.
  double sum_above(std::int64_t n) const;

 private:
  double integral_from(double t) const;

  TailIndexFunction A_;
  std::int64_t stride_;
  std::vector<double> exact_;  // sum_above(n) for n < exact_.size()
};

/// Asymptotic window on which the builder verifies A(x) P(X > x) / p (and the
/// left analogue) inside [0.9, 1.1].
struct TailWindow {
  double x_lo = 0.0;
  double x_hi = 0.0;
  int points = 0;
};

/// A probability law on the lattice h Z: dense table on [table_lo, table_hi],
/// analytic tails beyond it, and sparse atoms outside the table.
class LatticeLaw {
 public:
  class Builder;

  double h() const noexcept { return h_; }
  std::int64_t table_lo() const noexcept { return lo_; }
  std::int64_t table_hi() const noexcept { return lo_ + static_cast<std::int64_t>(table_.size()) - 1; }
  std::span<const double> table() const noexcept { return table_; }
  const std::vector<std::pair<std::int64_t, double>>& atoms() const noexcept { return atoms_; }

  double p() const noexcept { return p_; }
  double q() const noexcept { return q_; }
  bool two_sided() const noexcept { return two_sided_; }
  bool one_sided() const noexcept { return !two_sided_; }
  const std::optional<TailIndexFunction>& tail_index() const noexcept { return A_; }
  const TailIndexFunction& A() const;
  const std::string& family() const noexcept { return family_; }
  /// Builder parameters as JSON text; used by the serializer to rebuild analytic tails.
  const std::string& spec_json() const noexcept { return spec_json_; }
  std::uint64_t content_hash() const noexcept { return hash_; }

  double pmf(std::int64_t k) const;
  /// P(X > k h).
  double survival(std::int64_t k) const;
  /// P(X <= k h).
  double cdf(std::int64_t k) const;
  /// P(k0 h < X <= k1 h).
  double mass_between(std::int64_t k0, std::int64_t k1) const;
  std::vector<double> pmf_range(std::int64_t lo, std::int64_t hi) const;

  /// Smallest lattice index with positive mass (searches the table and atoms;
  /// tails reach to infinity on their side).
  std::int64_t min_support() const;
  double total_mass() const;

  /// Mixture components (weight, law) when the law was built as a mixture.
  const std::vector<std::pair<double, std::shared_ptr<const LatticeLaw>>>& components() const noexcept {
    return components_;
  }

  /// Lattice index for x, which must be a multiple of h up to 1e-9 relative.
  std::int64_t index_of(double x) const;
  /// Largest k with k h <= x.
  std::int64_t floor_index(double x) const;

 private:
  friend class Builder;
  LatticeLaw() = default;

  double right_sum(std::int64_t k) const;  // analytic tail beyond the table: sum over j > k >= table_hi
  double left_sum(std::int64_t k) const;   // analytic tail below the table: sum over j < k <= table_lo

  double h_ = 1.0;
  std::int64_t lo_ = 0;
  std::vector<double> table_;
  std::vector<long double> prefix_;  // prefix_[i] = sum table_[0..i)
  std::vector<std::pair<double, std::shared_ptr<const TailModel>>> right_;
  std::vector<std::pair<double, std::shared_ptr<const TailModel>>> left_;
  std::vector<std::pair<std::int64_t, double>> atoms_;  // sorted, outside the table
  std::vector<long double> atom_prefix_;
  double right_total_ = 0.0;  // P(X > table_hi)
  double left_total_ = 0.0;   // P(X < table_lo)
  double p_ = 1.0;
  double q_ = 0.0;
  bool two_sided_ = false;
  std::optional<TailIndexFunction> A_;
  std::string family_ = "custom";
  std::string spec_json_ = "{}";
  std::uint64_t hash_ = 0;
  std::vector<std::pair<double, std::shared_ptr<const LatticeLaw>>> components_;
};

class LatticeLaw::Builder {
 public:
  explicit Builder(double h);

  Builder& table(std::int64_t lo, std::vector<double> values);
  Builder& right_tail(double weight, std::shared_ptr<const TailModel> model);
  Builder& left_tail(double weight, std::shared_ptr<const TailModel> model);
  /// Atoms inside the table range are folded into the table.
  Builder& atom(std::int64_t k, double mass);
  Builder& tail_index(TailIndexFunction A);
  Builder& tail_constants(double p, double q);
  Builder& family(std::string name, std::string spec_json);
  Builder& tail_window(TailWindow w);
  Builder& component(double weight, std::shared_ptr<const LatticeLaw> law);
  /// Tolerance for |total mass - 1|.
  Builder& normalization_tolerance(double tol);

  /// Validates nonnegativity, normalization, junction agreement and the tail window.
  LatticeLaw build();

 private:
  LatticeLaw law_;
  std::map<std::int64_t, double> atoms_;
  std::optional<TailWindow> window_;
  double norm_tol_ = 1e-12;
};

/// F((a, b]) for real endpoints; infinite endpoints are allowed.
double mass_interval(const LatticeLaw& F, double a, double b);

/// Custom law from a finite pmf table (no analytic tail). When A is given the
/// tail window check applies, which rejects laws outside the heavy-tailed class.
LatticeLaw law_from_pmf(double h, std::int64_t k_lo, std::vector<double> pmf,
                        std::optional<TailIndexFunction> A = std::nullopt,
                        std::optional<TailWindow> window = std::nullopt);

// ---------------------------------------------------------------------------
// Families

inline constexpr std::int64_t kDefaultTableLength = std::int64_t{1} << 16;

/// P(X > n h) = min(1, 1/A(n h)); one-sided with p = 1, q = 0.
LatticeLaw make_pareto_lattice(const TailIndexFunction& A, double h,
                               std::int64_t table_len = kDefaultTableLength);

struct UaoSpec {
  TailIndexFunction A;
  std::vector<double> z_seq;    // increasing positive lattice points
  std::vector<double> eps_seq;  // positive, tending to 0
};

struct UaoLaw {
  LatticeLaw law;
  std::int64_t n0 = 0;
  double c1 = 0.0;
  double c2 = 0.0;
  std::vector<std::size_t> selected;   // indices into z_seq
  std::vector<double> spike_weight;    // eps / A(z) for each selected index
};

/// F = (F1 + F2)/2 with F1 the density-form law and F2 spikes on a greedily
/// selected subsequence whose weights eps/A(z) halve at every step.
UaoLaw make_uao_family(const UaoSpec& spec);
/// alpha = 1/2 with L = 1/log(1+x): z_n = 2^n - 1, eps_n = L(2^n)/L(1), n = 1..n_max.
UaoSpec uao_preset_spec(double alpha = 0.5, int n_max = 50);

enum class CounterexampleFamily { two_sided_sub_half, two_sided_half };

struct Cluster {
  int n = 0;
  double x_n = 0.0;
  std::vector<std::int64_t> index;  // lattice indices of the rounded points
  std::vector<double> mass;         // F2 masses (before the 1/2 mixture weight)
  double bound = 0.0;               // d_n
};

struct CounterexampleSpec {
  CounterexampleFamily family = CounterexampleFamily::two_sided_sub_half;
  double alpha = 0.25;
  double grid_h = 1.0;
  int n_max = 0;  // 0 selects the family default
};

struct CounterexampleLaw {
  LatticeLaw law;
  CounterexampleSpec spec;
  std::vector<Cluster> clusters;
  std::int64_t n0 = 0;
  double c1 = 0.0;
  double c2 = 0.0;
  double max_rounding = 0.0;  // largest |rounded - exact| cluster displacement
  double min_gap = 0.0;       // smallest gap between consecutive exact cluster points
  std::shared_ptr<const LatticeLaw> symmetric_part;
  std::shared_ptr<const LatticeLaw> cluster_part;
};

CounterexampleLaw make_twosided_counterexample(double alpha, double grid_h = 1.0, int n_max = 0);
/// The first cluster gap is e - 2, so the default grid is 1/2.
CounterexampleLaw make_half_counterexample(double grid_h = 0.5, int n_max = 0);

struct SmoothLaw {
  LatticeLaw law;
  double eps = 0.0;
  double target_exponent = 0.0;   // 1 - 2 alpha + eps
  double fitted_exponent = 0.0;
  double witnessed_C = 0.0;
};

/// Pareto law on a fine grid, certified against F((x,x+s])/F(x,inf) <= C (s/x)^(1-2a+eps).
SmoothLaw make_smooth_family(double alpha, double eps, double h = 0.125);

// ---------------------------------------------------------------------------
// Serialization: one JSON header line, then "k,pmf" CSV rows for the table and atoms.

void write_law(const LatticeLaw& F, std::ostream& out);
LatticeLaw read_law(std::istream& in);
/// Rebuilds a law from its builder parameters (family presets only).
LatticeLaw build_law_from_spec(const std::string& spec_json);

}  // namespace srtlab
