#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "srtlab/convolution.hpp"
#include "srtlab/lattice_law.hpp"

namespace srtlab {

enum class RenewalMethod { recursion, series_reciprocal, walk_sum };

std::string_view to_string(RenewalMethod m);
RenewalMethod renewal_method_from_string(std::string_view s);

/// u[k] = U({k h}) for k = 0..K.
struct RenewalTable {
  double h = 1.0;
  std::int64_t K = 0;
  std::vector<double> u;
  std::vector<double> cumulative;        // U([0, k h]) restricted to k >= 0
  RenewalMethod method = RenewalMethod::recursion;
  std::vector<double> truncation_error;  // two-sided only: certified bound per k
  std::int64_t n_max = 0;                // two-sided only
  double c_sup = 0.0;                    // two-sided only: certified uniform-bound constant (already doubled)
  ErrorLedger ledger;
  std::uint64_t law_hash = 0;

  double at(std::int64_t k) const;
  /// U([0, k h]).
  double U(std::int64_t k) const;
};

/// Exact O(K^2) long double recursion, used as the correctness oracle.
/// u(k) = (1{k=0} + sum_{j=1..k} f(j) u(k-j)) / (1 - f(0)).
std::vector<double> renewal_recursion(std::span<const double> f, std::size_t K);

/// Same sequence by online divide-and-conquer convolution, O(K log^2 K).
std::vector<double> renewal_series_reciprocal(std::span<const double> f, std::size_t K,
                                              ErrorLedger* ledger = nullptr);

RenewalTable renewal_measure_onesided(const LatticeLaw& F, std::int64_t K,
                                      RenewalMethod method = RenewalMethod::series_reciprocal);

struct TwoSidedOptions {
  std::int64_t margin = -1;  // window pad on both sides; -1 selects K
  double tolerance = std::numeric_limits<double>::infinity();
  std::size_t fft_budget = kDefaultFftBudget;
};

/// Sum over n <= N of P(S_n = k h) on [0, K] with a certified uniform truncation bound.
/// Throws ToleranceError when the bound exceeds options.tolerance.
RenewalTable renewal_measure_twosided(const LatticeLaw& F, std::int64_t K, std::int64_t n_max,
                                      const TwoSidedOptions& options = {});

/// sum_{n > N} 1/a_n, bounded above by the integral of 1/a_t over t > N.
double inverse_scale_tail(const TailIndexFunction& A, std::int64_t N);

// ---------------------------------------------------------------------------
// Walk marginals

/// P(S_n = k h) on window w. Exact for one-sided laws; otherwise windowed with
/// escaped_mass bounding everything outside or lost.
WalkPmf walk_pmf(const LatticeLaw& F, std::int64_t n, Window w, ErrorLedger* ledger = nullptr,
                 std::size_t fft_budget = kDefaultFftBudget);

/// One-sided laws: S_n marginals on [0, k_hi] for n = 2^e, e = 0..e_max, by repeated squaring.
std::vector<WalkPmf> walk_pmf_dyadic(const LatticeLaw& F, int e_max, std::int64_t k_hi,
                                     ErrorLedger* ledger = nullptr,
                                     std::size_t fft_budget = kDefaultFftBudget);

/// P(S_n = k h, max X_i <= xi) on window w; the truncated pmf is not renormalized.
WalkPmf restricted_walk_pmf(const LatticeLaw& F, std::int64_t n, double xi, Window w,
                            ErrorLedger* ledger = nullptr, std::size_t fft_budget = kDefaultFftBudget);

/// P(S_n = k h) at a single lattice index for n = 0..n_max, by stepwise convolution.
std::vector<double> point_marginals(const LatticeLaw& F, std::int64_t k, std::int64_t n_max,
                                    ErrorLedger* ledger = nullptr);

/// (x/A(x)) sum_{1 <= n <= A(delta x)} P(S_n in x + I).
double small_n_sum(const LatticeLaw& F, double x, double delta);
/// small_n_sum for several deltas from one pass of marginals.
std::vector<double> small_n_sums(const LatticeLaw& F, double x, std::span<const double> deltas);

struct BigJumpDecomposition {
  std::int64_t n = 0;
  double x = 0.0;
  double xi = 0.0;
  std::vector<double> component;  // P(S_n in x+I, B^k), k = 0..k_max
  double remainder = 0.0;         // P(S_n in x+I, B^{>= k_max+1})
  double total = 0.0;             // P(S_n in x+I)
  bool remainder_direct = false;  // one-sided laws sum the remainder explicitly
};

/// Big jumps are increments > xi = a_n^gamma x^(1-gamma).
BigJumpDecomposition bigjump_decomposition(const LatticeLaw& F, std::int64_t n, double x, int k_max);
BigJumpDecomposition bigjump_decomposition(const LatticeLaw& F, std::int64_t n, double x, int k_max,
                                           double xi);

struct UniformBoundReport {
  std::vector<std::int64_t> n;
  std::vector<double> scaled_max;  // a_n * max_k P(S_n = k h)
  double constant = 0.0;           // max of scaled_max
  bool monotone_sane = true;       // no entry exceeds twice the running maximum of its predecessors
};

/// Empirical constant of max_k P(S_n = k h) <= C / a_n over the given n.
UniformBoundReport certify_uniform_bound(const LatticeLaw& F, std::span<const std::int64_t> n_list,
                                         double window_scale = 10.0);

}  // namespace srtlab
