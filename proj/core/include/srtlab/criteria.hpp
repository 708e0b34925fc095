#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "srtlab/lattice_law.hpp"
#include "srtlab/stats.hpp"

namespace srtlab {

// ---------------------------------------------------------------------------
// Trend classifier

enum class Trend { vanishing, bounded, growing, inconclusive };

std::string_view to_string(Trend t);

struct TrendThresholds {
  static constexpr double slope = 0.05;    // |slope of ln Q against ln ln x|
  static constexpr double r_squared = 0.5;
  static constexpr double halving = 0.7;   // Q(eta/2) / Q(eta) at the largest x
};

/// Q[i][j] at eta[i] (decreasing) and x[j] (increasing).
struct CriterionGrid {
  std::string criterion;
  std::vector<double> eta;
  std::vector<double> x;
  std::vector<std::vector<double>> Q;
  std::optional<double> T;
  Trend trend = Trend::inconclusive;
  std::vector<LinearFit> fits;        // per eta: ln Q against ln ln x
  std::vector<double> halving_rates;  // Q[i+1][last] / Q[i][last]
};

/// Per-row fits and halving rates used by classify_trend.
void trend_statistics(const CriterionGrid& grid, std::vector<LinearFit>& fits, std::vector<double>& halving);

/// Rules in order: all zero -> vanishing; a single row uses its slope
/// (< -0.05 vanishing, > 0.05 growing, both with R^2 > 0.5; |slope| <= 0.05 bounded);
/// minimum slope over the eta rows > 0.05 with R^2 > 0.5 on that row -> growing;
/// every halving rate <= 0.7 -> vanishing; all |slope| <= 0.05 -> bounded;
/// otherwise inconclusive.
Trend classify_trend(const CriterionGrid& grid);
/// Fills fits, halving_rates and trend.
void annotate_trend(CriterionGrid& grid);

/// OLS of ln Q against ln eta in the column of the largest x.
LinearFit eta_exponent(const CriterionGrid& grid);

// ---------------------------------------------------------------------------
// Pointwise criteria

/// r(x) = F(x + I) x / F((x, inf)), x >= h on the lattice.
double r_func(const LatticeLaw& F, double x);

/// Integral of (r(y) - T)^+ over (a, b], with r(y) = r(k h) on the cell ((k-1) h, k h].
double R_T(const LatticeLaw& F, double a, double b, double T);

struct DoneySup {
  double sup = 0.0;
  double argmax = 0.0;
};

DoneySup doney_sup(const LatticeLaw& F, double x_max);

/// Integral of A(s)^2 / s^2 over [1, x].
double chi_u(const TailIndexFunction& A, double x);

/// R_T((1-eta) x, x) / A(x)^2, times chi_u(x) when alpha = 1/2.
double chi_diag(const LatticeLaw& F, double eta, double x, double T);

/// (x/A(x)) sum over lattice s in [1, eta x) of (A(s)^2 / s) f(x - s).
double ns_diag_density(const LatticeLaw& F, double eta, double x);

/// (x/A(x)) integral over [1, eta x] of (A(s)^2 / s^2) F((x - s, x]) ds, as exact cell sums.
double ns_diag_interval(const LatticeLaw& F, double eta, double x);

/// ns_diag_density plus the mirrored sum of (A(s)^2 / s) f(x + s) when q > 0.
double ns_diag_twosided(const LatticeLaw& F, double eta, double x);

struct HalfConditionReport {
  std::vector<double> x;
  std::vector<double> ratio;  // L*(x) / L(x)
  double sup = 0.0;
  double witnessed_x = 0.0;
  Trend growth = Trend::inconclusive;
  bool holds_on_range = false;
};

/// Requires alpha = 1/2. Ratio L*(x)/L(x) on x = 2^1, 2^2, ... <= x_max.
HalfConditionReport half_condition(const TailIndexFunction& A, double x_max);

using SRule = std::function<std::vector<double>(double x)>;

/// s = 1, 2, 4, ... <= sqrt(x).
std::vector<double> dyadic_s_rule(double x);

struct SmoothnessReport {
  double fitted_exponent = 0.0;
  double target_exponent = 0.0;   // 1 - 2 alpha + eps
  double witnessed_C = 0.0;       // max of ratio / (s/x)^target
  double r_squared = 0.0;
  bool certified = false;
  bool inconclusive = false;
  double worst_x = 0.0;
  double worst_s = 0.0;
  std::size_t points = 0;
  double max_residual = 0.0;      // largest ln-residual of the fit
  bool residual_flag = false;     // max_residual > 1 (an isolated spike)
  bool anchor_ok = true;          // ratio at s = x is at most 1
};

/// Regression of ln(F((x, x+s]) / F((x, inf))) against ln(s/x). Requires alpha <= 1/2.
SmoothnessReport smoothness_exponent(const LatticeLaw& F, std::span<const double> x_list, double eps,
                                     const SRule& s_rule = dyadic_s_rule);

// ---------------------------------------------------------------------------
// Grids

enum class CriterionKind { doney, chi, ns_density, ns_interval, ns_twosided };

std::string_view to_string(CriterionKind k);
CriterionKind criterion_kind_from_string(std::string_view s);

std::vector<double> default_eta_list();
std::vector<double> default_x_list();  // 2^12 .. 2^22

struct GridOptions {
  double T = 1.0;            // chi cutoff
  unsigned threads = 0;      // 0 selects hardware concurrency
};

/// Evaluates Q over (eta, x) in parallel and classifies the result. Doney
/// uses a single row (eta = 1) holding the running sup of r up to x.
CriterionGrid evaluate_grid(const LatticeLaw& F, CriterionKind kind, std::span<const double> eta_list,
                            std::span<const double> x_list, const GridOptions& options = {});

}  // namespace srtlab
