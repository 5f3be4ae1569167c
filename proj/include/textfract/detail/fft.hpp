#pragma once

#include <fftw3.h>

#include <algorithm>
#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

namespace textfract::detail {

// FFTW planning touches global state; execution on a private plan does not.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};

template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <typename T>
FftwBuffer<T> fftw_alloc(std::size_t n) {
  return FftwBuffer<T>(static_cast<T*>(fftw_malloc(sizeof(T) * std::max<std::size_t>(n, 1))));
}

class FftwPlan {
 public:
  explicit FftwPlan(fftw_plan p) : plan_(p) {}
  FftwPlan(const FftwPlan&) = delete;
  FftwPlan& operator=(const FftwPlan&) = delete;
  ~FftwPlan() {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan_);
  }
  void execute() const { fftw_execute(plan_); }

 private:
  fftw_plan plan_;
};

/// Unnormalized forward real DFT: X_k = sum_j x_j exp(-2 pi i k j / n), k = 0..n/2.
inline std::vector<std::complex<double>> rfft(std::span<const double> x) {
  const std::size_t n = x.size();
  const std::size_t nc = n / 2 + 1;
  auto in = fftw_alloc<double>(n);
  auto out = fftw_alloc<fftw_complex>(nc);
  fftw_plan raw;
  {
    std::lock_guard lock(fftw_planner_mutex());
    raw = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE);
  }
  FftwPlan plan(raw);
  std::copy(x.begin(), x.end(), in.get());
  plan.execute();
  std::vector<std::complex<double>> result(nc);
  for (std::size_t k = 0; k < nc; ++k) result[k] = {out[k][0], out[k][1]};
  return result;
}

/// Inverse of rfft, including the 1/n factor. `spectrum` holds n/2+1 bins.
inline std::vector<double> irfft(std::span<const std::complex<double>> spectrum, std::size_t n) {
  const std::size_t nc = n / 2 + 1;
  auto in = fftw_alloc<fftw_complex>(nc);
  auto out = fftw_alloc<double>(n);
  fftw_plan raw;
  {
    std::lock_guard lock(fftw_planner_mutex());
    raw = fftw_plan_dft_c2r_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE);
  }
  FftwPlan plan(raw);
  for (std::size_t k = 0; k < nc; ++k) {
    in[k][0] = spectrum[k].real();
    in[k][1] = spectrum[k].imag();
  }
  plan.execute();
  std::vector<double> result(out.get(), out.get() + n);
  const double scale = 1.0 / static_cast<double>(n);
  for (double& v : result) v *= scale;
  return result;
}

}  // namespace textfract::detail
