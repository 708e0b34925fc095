#pragma once

#include <cstddef>
#include <span>

namespace srtlab {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
};

/// Ordinary least squares y = intercept + slope x. Fewer than two points or
/// a constant abscissa yields a zero fit with r_squared = 0.
LinearFit ols(std::span<const double> x, std::span<const double> y);

/// Kahan-compensated accumulator; merge is associative up to rounding of the compensation.
class KahanSum {
 public:
  void add(double v) noexcept {
    const double y = v - c_;
    const double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  void merge(const KahanSum& o) noexcept {
    add(o.s_);
    add(-o.c_);
  }
  double value() const noexcept { return s_ - c_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

}  // namespace srtlab
