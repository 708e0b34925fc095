#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace srtlab {

enum class SlowKind { constant, log_power, reciprocal_log, tabulated };

std::string_view to_string(SlowKind kind);

/// Slowly varying factor L of a tail index function.
///
/// log_power(beta) is (log(1+x))^beta, reciprocal_log is 1/log(1+x).
/// Tabulated profiles interpolate linearly in log-log coordinates between
/// breakpoints and are constant beyond both ends.
class SlowlyVarying {
 public:
  static SlowlyVarying constant(double c = 1.0);
  static SlowlyVarying log_power(double beta);
  static SlowlyVarying reciprocal_log();
  /// Rejects tables whose ratio L(2x)/L(x) leaves [1/(1+slack), 1+slack].
  static SlowlyVarying tabulated(std::vector<double> x, std::vector<double> value,
                                 double slack = 0.25);

  double operator()(double x) const;
  double log_value(double x) const;
  /// x L'(x) / L(x).
  double elasticity(double x) const;
  /// log L(x1) - log L(x0) without cancellation when x1 is close to x0.
  double log_ratio(double x1, double x0) const;
  /// sup of L over [a, b], exact for every kind.
  double sup_between(double a, double b) const;

  SlowKind kind() const noexcept { return kind_; }
  double scale() const noexcept { return scale_; }
  double beta() const noexcept { return beta_; }
  std::span<const double> table_x() const noexcept { return tx_; }
  std::span<const double> table_value() const noexcept { return tv_; }
  double slack() const noexcept { return slack_; }

  bool operator==(const SlowlyVarying&) const = default;

 private:
  SlowlyVarying() = default;
  std::size_t segment(double x) const;

  SlowKind kind_ = SlowKind::constant;
  double scale_ = 1.0;
  double beta_ = 0.0;
  double slack_ = 0.0;
  std::vector<double> tx_;
  std::vector<double> tv_;
  std::vector<double> log_tx_;
  std::vector<double> log_tv_;
};

/// A(x) = x^alpha L(x) normalized so that A(0) = 1/2 and A(1) = 1.
///
/// For x >= 1 the value is A_raw(x + s) / A_raw(1 + s) with A_raw = x^alpha L(x)
/// and s >= 0 the smallest shift that makes A_raw increasing on [1 + s, inf).
/// On [0, 1] a bridge 2^(x-1) joins the anchors.
class TailIndexFunction {
 public:
  TailIndexFunction(double alpha, SlowlyVarying L);

  double alpha() const noexcept { return alpha_; }
  const SlowlyVarying& slowly_varying() const noexcept { return L_; }
  double shift() const noexcept { return shift_; }

  double operator()(double x) const;
  double log_value(double x) const;
  /// log A(x1) - log A(x0), accurate for nearby arguments.
  double log_ratio(double x1, double x0) const;
  /// x A'(x) / A(x).
  double elasticity(double x) const;
  double derivative(double x) const;
  /// Solves A(x) = y for y >= 1/2.
  double inverse(double y) const;

  std::string serialize() const;
  static TailIndexFunction deserialize(std::string_view text);
  std::uint64_t content_hash() const;

  bool operator==(const TailIndexFunction& other) const {
    return alpha_ == other.alpha_ && L_ == other.L_;
  }

 private:
  double raw_log(double y) const;

  double alpha_;
  SlowlyVarying L_;
  double shift_ = 0.0;
  double log_norm_ = 0.0;
};

double eval_A(const TailIndexFunction& A, double x);
double inverse_A(const TailIndexFunction& A, double y);
/// L*(x) = sup over [1, x] of the slowly varying factor.
double eval_Lstar(const TailIndexFunction& A, double x);

/// Running supremum of L on a dyadic grid (depth points per doubling).
class LStarCache {
 public:
  LStarCache(SlowlyVarying L, double x_max, int depth = 8);

  double operator()(double x) const;
  double x_max() const noexcept { return grid_.empty() ? 1.0 : grid_.back(); }
  int depth() const noexcept { return depth_; }
  std::span<const double> grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }

 private:
  SlowlyVarying L_;
  int depth_;
  std::vector<double> grid_;
  std::vector<double> values_;
};

struct PotterReport {
  bool lower_ok = false;
  bool upper_ok = false;
  double ratio = 0.0;
  double lower_bound = 0.0;  // rho^(alpha+eps) / cap
  double upper_bound = 0.0;  // cap * rho^(alpha-eps)
};

inline constexpr double kPotterConstantCap = 4.0;

PotterReport potter_check(const TailIndexFunction& A, double rho, double x, double eps,
                          double cap = kPotterConstantCap);

/// [sum_{n<=t} n^zeta L(n)] / [t^(zeta+1) L(t) / (zeta+1)].
double karamata_partial_sum_check(double zeta, const SlowlyVarying& L, std::int64_t t);

/// 64-bit FNV-1a, used for content hashes of serialized objects.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 14695981039346656037ULL);
std::string hex64(std::uint64_t value);

}  // namespace srtlab
