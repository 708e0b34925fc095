#include "srtlab/convolution.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstring>
#include <limits>
#include <mutex>
#include <numeric>
#include <string>

#include <fftw3.h>

#include "srtlab/errors.hpp"

namespace srtlab {

namespace {

// The FFTW planner is not reentrant; execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

constexpr std::size_t kDirectWork = std::size_t{1} << 15;

std::size_t good_fft_size(std::size_t n) {
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (std::size_t p2 = 1; p2 < 2 * n + 2; p2 *= 2)
    for (std::size_t p3 = p2; p3 < 2 * n + 2; p3 *= 3)
      for (std::size_t p5 = p3; p5 < 2 * n + 2; p5 *= 5)
        if (p5 >= n && p5 < best && p5 % 2 == 0) best = p5;
  return best;
}

struct RealBuffer {
  double* data = nullptr;
  std::size_t n = 0;  // logical real length, storage holds n/2+1 complex
  explicit RealBuffer(std::size_t len) : n(len) {
    data = static_cast<double*>(fftw_malloc(sizeof(double) * 2 * (len / 2 + 1)));
    if (!data) throw BudgetError("fftw_malloc failed for length " + std::to_string(len));
  }
  ~RealBuffer() { fftw_free(data); }
  RealBuffer(const RealBuffer&) = delete;
  RealBuffer& operator=(const RealBuffer&) = delete;
  fftw_complex* complex() { return reinterpret_cast<fftw_complex*>(data); }
};

struct Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  Plans(RealBuffer& buf) {
    std::lock_guard lock(planner_mutex());
    const int n = static_cast<int>(buf.n);
    forward = fftw_plan_dft_r2c_1d(n, buf.data, buf.complex(), FFTW_ESTIMATE);
    backward = fftw_plan_dft_c2r_1d(n, buf.complex(), buf.data, FFTW_ESTIMATE);
  }
  ~Plans() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
  }
  Plans(const Plans&) = delete;
  Plans& operator=(const Plans&) = delete;
};

double abs_sum(std::span<const double> v) {
  long double s = 0;
  for (double x : v) s += std::fabs(x);
  return static_cast<double>(s);
}

void load(RealBuffer& buf, std::span<const double> v) {
  const std::size_t storage = 2 * (buf.n / 2 + 1);
  std::copy(v.begin(), v.end(), buf.data);
  std::fill(buf.data + v.size(), buf.data + storage, 0.0);
}

void clamp_into(std::span<double> out, const double* src, double inv_n, double scale, ErrorLedger* ledger) {
  ErrorLedger local;
  local.max_scale = scale;
  local.fft_products = 1;
  for (std::size_t i = 0; i < out.size(); ++i) {
    double v = src[i] * inv_n;
    if (v < 0.0) {
      ++local.clamped_count;
      local.clamped_mass += -v;
      local.max_clamped = std::max(local.max_clamped, -v);
      v = 0.0;
    }
    out[i] = v;
  }
  if (ledger) ledger->merge(local);
}

std::size_t checked_size(std::size_t needed, std::size_t budget) {
  const std::size_t n = good_fft_size(needed);
  if (n > budget)
    throw BudgetError("convolution needs FFT length " + std::to_string(n) + " above budget " +
                      std::to_string(budget));
  return n;
}

}  // namespace

void ErrorLedger::merge(const ErrorLedger& other) {
  clamped_count += other.clamped_count;
  clamped_mass += other.clamped_mass;
  max_clamped = std::max(max_clamped, other.max_clamped);
  max_scale = std::max(max_scale, other.max_scale);
  fft_products += other.fft_products;
}

std::vector<double> convolve_direct(std::span<const double> a, std::span<const double> b,
                                    std::size_t out_len) {
  std::vector<double> out(out_len, 0.0);
  for (std::size_t k = 0; k < out_len; ++k) {
    long double s = 0.0L;
    const std::size_t i_lo = k >= b.size() ? k - b.size() + 1 : 0;
    const std::size_t i_hi = std::min(k, a.size() == 0 ? 0 : a.size() - 1);
    if (a.empty() || b.empty() || i_lo > i_hi) continue;
    for (std::size_t i = i_lo; i <= i_hi; ++i)
      s += static_cast<long double>(a[i]) * static_cast<long double>(b[k - i]);
    out[k] = static_cast<double>(s);
  }
  return out;
}

std::vector<double> convolve_prefix(std::span<const double> a, std::span<const double> b,
                                    std::size_t out_len, ErrorLedger* ledger, std::size_t fft_budget) {
  if (a.empty() || b.empty() || out_len == 0) return std::vector<double>(out_len, 0.0);
  a = a.first(std::min(a.size(), out_len));
  b = b.first(std::min(b.size(), out_len));
  const std::size_t full = a.size() + b.size() - 1;
  if (a.size() * b.size() <= kDirectWork || std::min(a.size(), b.size()) <= 16)
    return convolve_direct(a, b, out_len);

  const std::size_t n = checked_size(std::min(full, std::max(out_len, a.size()) + b.size()), fft_budget);
  RealBuffer fa(n), fb(n);
  Plans pa(fa), pb(fb);
  load(fa, a);
  load(fb, b);
  fftw_execute(pa.forward);
  fftw_execute(pb.forward);
  fftw_complex* ca = fa.complex();
  fftw_complex* cb = fb.complex();
  for (std::size_t i = 0; i < n / 2 + 1; ++i) {
    const double re = ca[i][0] * cb[i][0] - ca[i][1] * cb[i][1];
    const double im = ca[i][0] * cb[i][1] + ca[i][1] * cb[i][0];
    ca[i][0] = re;
    ca[i][1] = im;
  }
  fftw_execute(pa.backward);
  std::vector<double> out(out_len, 0.0);
  const std::size_t valid = std::min(out_len, full);
  clamp_into(std::span<double>(out).first(valid), fa.data, 1.0 / static_cast<double>(n),
             abs_sum(a) * abs_sum(b), ledger);
  return out;
}

std::vector<double> square_prefix(std::span<const double> a, std::size_t out_len, ErrorLedger* ledger,
                                  std::size_t fft_budget) {
  if (a.empty() || out_len == 0) return std::vector<double>(out_len, 0.0);
  a = a.first(std::min(a.size(), out_len));
  const std::size_t full = 2 * a.size() - 1;
  if (a.size() * a.size() <= kDirectWork) return convolve_direct(a, a, out_len);

  const std::size_t n = checked_size(std::min(full, out_len + a.size()), fft_budget);
  RealBuffer fa(n);
  Plans pa(fa);
  load(fa, a);
  fftw_execute(pa.forward);
  fftw_complex* ca = fa.complex();
  for (std::size_t i = 0; i < n / 2 + 1; ++i) {
    const double re = ca[i][0] * ca[i][0] - ca[i][1] * ca[i][1];
    const double im = 2.0 * ca[i][0] * ca[i][1];
    ca[i][0] = re;
    ca[i][1] = im;
  }
  fftw_execute(pa.backward);
  std::vector<double> out(out_len, 0.0);
  const std::size_t valid = std::min(out_len, full);
  const double s = abs_sum(a);
  clamp_into(std::span<double>(out).first(valid), fa.data, 1.0 / static_cast<double>(n), s * s, ledger);
  return out;
}

// ---------------------------------------------------------------------------

struct FixedKernelConvolver::Impl {
  RealBuffer kernel;
  RealBuffer work;
  Plans kernel_plans;
  Plans work_plans;
  Impl(std::size_t n) : kernel(n), work(n), kernel_plans(kernel), work_plans(work) {}
};

FixedKernelConvolver::FixedKernelConvolver(std::span<const double> kernel, std::size_t signal_len,
                                           std::size_t out_len, std::size_t fft_budget)
    : impl_(nullptr), n_(0), signal_len_(signal_len), out_len_(out_len), kernel_mass_(abs_sum(kernel)) {
  kernel = kernel.first(std::min(kernel.size(), out_len));
  const std::size_t needed = std::max<std::size_t>(
      2, std::min(signal_len + kernel.size(), out_len + std::max(signal_len, kernel.size())));
  n_ = checked_size(needed, fft_budget);
  impl_ = new Impl(n_);
  load(impl_->kernel, kernel);
  fftw_execute(impl_->kernel_plans.forward);
}

FixedKernelConvolver::~FixedKernelConvolver() { delete impl_; }

void FixedKernelConvolver::apply(std::span<const double> signal, std::span<double> out, ErrorLedger* ledger) {
  if (signal.size() > signal_len_) throw std::length_error("signal longer than the planned length");
  load(impl_->work, signal);
  fftw_execute(impl_->work_plans.forward);
  fftw_complex* cw = impl_->work.complex();
  const fftw_complex* ck = impl_->kernel.complex();
  for (std::size_t i = 0; i < n_ / 2 + 1; ++i) {
    const double re = cw[i][0] * ck[i][0] - cw[i][1] * ck[i][1];
    const double im = cw[i][0] * ck[i][1] + cw[i][1] * ck[i][0];
    cw[i][0] = re;
    cw[i][1] = im;
  }
  fftw_execute(impl_->work_plans.backward);
  const std::size_t m = std::min(out.size(), out_len_);
  clamp_into(out.first(m), impl_->work.data, 1.0 / static_cast<double>(n_), abs_sum(signal) * kernel_mass_,
             ledger);
  std::fill(out.begin() + static_cast<std::ptrdiff_t>(m), out.end(), 0.0);
}

// ---------------------------------------------------------------------------

double WalkPmf::total() const noexcept {
  long double s = 0;
  for (double v : values) s += v;
  return static_cast<double>(s);
}

WalkPmf WalkPmf::delta(std::int64_t k) {
  WalkPmf w;
  w.k_lo = w.k_hi = k;
  w.values = {1.0};
  return w;
}

WalkPmf convolve(const WalkPmf& a, const WalkPmf& b, Window w, ErrorLedger* ledger) {
  constexpr std::int64_t kIndexLimit = std::int64_t{1} << 52;
  auto check = [](std::int64_t v) {
    if (v > kIndexLimit || v < -kIndexLimit) throw std::overflow_error("lattice index overflow in convolve");
  };
  check(a.k_lo); check(a.k_hi); check(b.k_lo); check(b.k_hi); check(w.lo); check(w.hi);
  if (w.hi < w.lo) throw std::invalid_argument("convolve: empty window");

  WalkPmf out;
  out.n = a.n + b.n;
  out.k_lo = w.lo;
  out.k_hi = w.hi;
  out.values.assign(static_cast<std::size_t>(w.size()), 0.0);
  if (!a.values.empty() && !b.values.empty()) {
    const std::int64_t base = a.k_lo + b.k_lo;
    const std::int64_t top = a.k_hi + b.k_hi;
    const std::int64_t lo = std::max(base, w.lo);
    const std::int64_t hi = std::min(top, w.hi);
    if (lo <= hi) {
      // work relative to base; only entries up to hi are needed
      const std::size_t need = static_cast<std::size_t>(hi - base + 1);
      std::vector<double> full = convolve_prefix(a.values, b.values, need, ledger);
      for (std::int64_t k = lo; k <= hi; ++k)
        out.values[static_cast<std::size_t>(k - w.lo)] = full[static_cast<std::size_t>(k - base)];
    }
  }
  const double leaving = std::max(0.0, a.total() * b.total() - out.total());
  out.escaped_mass = std::min(1.0, a.escaped_mass + b.escaped_mass + leaving);
  return out;
}

}  // namespace srtlab
