#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace srtlab {

/// Record of negative round-off clamped to zero by transform-based products.
struct ErrorLedger {
  std::uint64_t clamped_count = 0;
  double clamped_mass = 0.0;     // total magnitude removed
  double max_clamped = 0.0;      // largest single magnitude removed
  double max_scale = 0.0;        // largest product scale seen
  std::uint64_t fft_products = 0;

  void merge(const ErrorLedger& other);
  /// True when every clamped value was below 1e-15 of its product scale.
  bool within_dust() const noexcept { return max_clamped <= 1e-15 * (max_scale > 0 ? max_scale : 1.0); }
};

/// Largest FFT length any product may use (2^27 doubles, about 1 GiB per buffer).
inline constexpr std::size_t kDefaultFftBudget = std::size_t{1} << 27;

/// Linear convolution c = a * b truncated to the first out_len entries.
/// Small inputs use an exact long double direct sum; larger ones use FFTW.
std::vector<double> convolve_prefix(std::span<const double> a, std::span<const double> b,
                                    std::size_t out_len, ErrorLedger* ledger = nullptr,
                                    std::size_t fft_budget = kDefaultFftBudget);

/// a * a truncated to out_len entries, with one forward transform.
std::vector<double> square_prefix(std::span<const double> a, std::size_t out_len,
                                  ErrorLedger* ledger = nullptr,
                                  std::size_t fft_budget = kDefaultFftBudget);

/// Direct O(n m) product in long double. Used for small sizes and as a test oracle.
std::vector<double> convolve_direct(std::span<const double> a, std::span<const double> b,
                                    std::size_t out_len);

/// Repeated convolution with one fixed kernel, reusing the kernel transform.
class FixedKernelConvolver {
 public:
  FixedKernelConvolver(std::span<const double> kernel, std::size_t signal_len, std::size_t out_len,
                       std::size_t fft_budget = kDefaultFftBudget);
  ~FixedKernelConvolver();
  FixedKernelConvolver(const FixedKernelConvolver&) = delete;
  FixedKernelConvolver& operator=(const FixedKernelConvolver&) = delete;

  /// out[0..out_len) = (signal * kernel)[0..out_len); signal.size() <= signal_len.
  void apply(std::span<const double> signal, std::span<double> out, ErrorLedger* ledger = nullptr);

  std::size_t fft_size() const noexcept { return n_; }

 private:
  struct Impl;
  Impl* impl_;
  std::size_t n_;
  std::size_t signal_len_;
  std::size_t out_len_;
  double kernel_mass_;
};

/// Distribution of S_n on a closed window of lattice indices.
struct WalkPmf {
  std::int64_t n = 0;
  std::int64_t k_lo = 0;
  std::int64_t k_hi = -1;
  std::vector<double> values;     // P(S_n = k h), k = k_lo..k_hi
  double escaped_mass = 0.0;      // certified bound on probability outside the window

  std::size_t size() const noexcept { return values.size(); }
  double at(std::int64_t k) const noexcept {
    return (k < k_lo || k > k_hi) ? 0.0 : values[static_cast<std::size_t>(k - k_lo)];
  }
  double total() const noexcept;
  static WalkPmf delta(std::int64_t k);
};

struct Window {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  std::int64_t size() const noexcept { return hi - lo + 1; }
};

/// Exact discrete convolution of two windowed distributions, restricted to w.
WalkPmf convolve(const WalkPmf& a, const WalkPmf& b, Window w, ErrorLedger* ledger = nullptr);

}  // namespace srtlab
