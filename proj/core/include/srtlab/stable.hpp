#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "srtlab/convolution.hpp"
#include "srtlab/lattice_law.hpp"

namespace srtlab {

/// Density of the stable limit of S_n / a_n, with a_n = A^{-1}(n).
///
/// The one-sided law has Laplace transform exp(-Gamma(1-alpha) lambda^alpha), so
/// that P(Z > x) ~ x^-alpha. Large arguments use the convergent power series in
/// x^-alpha; small arguments use the Zolotarev integral. With q > 0 the density
/// comes from characteristic-function inversion.
class StableDensity {
 public:
  explicit StableDensity(double alpha, double p = 1.0, double q = 0.0);

  double operator()(double x) const;
  double alpha() const noexcept { return alpha_; }
  double p() const noexcept { return p_; }
  double q() const noexcept { return q_; }
  bool one_sided() const noexcept { return q_ == 0.0; }
  /// Gamma(1-alpha)^(1/alpha): phi(x) = f(x / scale) / scale for the standard law f.
  double scale() const noexcept { return scale_; }
  /// Smallest x at which the series is used (one-sided only).
  double crossover() const noexcept { return crossover_ * scale_; }

  /// Series value; NaN when the series does not converge cleanly at x.
  double series(double x) const;
  double integral(double x) const;
  double cf_inversion(double x) const;
  /// P(Z > x) for one-sided laws.
  double survival(double x) const;

  double argmax() const noexcept { return argmax_; }
  double sup() const noexcept { return sup_; }

 private:
  double standard_series(double y, double* cancellation) const;
  double standard_integral(double y) const;
  double standard_cdf_integral(double y) const;

  double alpha_;
  double p_;
  double q_;
  double scale_;
  double crossover_ = 0.0;
  double argmax_ = 0.0;
  double sup_ = 0.0;
};

double stable_density(const StableDensity& phi, double x);

/// phi tabulated on a uniform grid over [y_lo, y_hi] with 4-point cubic interpolation;
/// zero outside the grid.
class StableTable {
 public:
  StableTable(const StableDensity& phi, double y_lo, double y_hi, std::size_t points);
  double operator()(double y) const;

 private:
  double lo_;
  double step_;
  std::vector<double> values_;
};

struct LltReport {
  std::int64_t n = 0;
  double a_n = 0.0;
  double statistic = 0.0;  // sup |a_n P(S_n = k h)/h - phi(k h / a_n)|
  double argmax_x = 0.0;   // k h / a_n at the sup
  double sup_phi = 0.0;
  ErrorLedger ledger;
};

LltReport llt_error(const LatticeLaw& F, std::int64_t n, double window_scale = 10.0);
/// n = 2^e for each e, from one squaring chain (one-sided laws).
std::vector<LltReport> llt_error_dyadic(const LatticeLaw& F, std::span<const int> exponents,
                                        double window_scale = 10.0);

enum class KRegion { positive, symmetric };  // [1,2] or [-2,-1] u [1,2]

KRegion default_region(const LatticeLaw& F);

/// a_n * inf over z with z/a_n in K of P(S_n in z + J, max X_i <= c_mult a_n).
double llt_truncated_lower(const LatticeLaw& F, std::int64_t n, double c_mult, KRegion region);

}  // namespace srtlab
