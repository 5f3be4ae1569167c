#pragma once

// Continuous wavelet coefficient maps with the third derivative of a Gaussian.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "textfract/error.hpp"
#include "textfract/series.hpp"

namespace textfract {

/// psi(x) = d^3/dx^3 exp(-x^2/2) = (3x - x^3) exp(-x^2/2).
inline double mother_wavelet(double x) { return (3.0 * x - x * x * x) * std::exp(-0.5 * x * x); }

/// |x| beyond which psi is treated as zero (|psi| < 1e-11 there).
inline constexpr double kWaveletSupport = 8.0;

struct WaveletMap {
  std::vector<double> scales;
  std::vector<std::size_t> positions;        // 1-based sentence indices
  std::vector<std::vector<double>> coefficients;  // [scale][position]
  std::vector<std::vector<bool>> edge_affected;   // support leaves the series
};

/// T(s, k) = s^{-1/2} sum_j x_j psi((j - k)/s), j and k 1-based.
///
/// No padding is applied; coefficients whose truncated support crosses either
/// end of the series are marked in `edge_affected`.
inline WaveletMap wavelet_map(const Series& series, std::span<const double> scales,
                              std::span<const std::size_t> positions) {
  const std::size_t n = series.size();
  if (scales.empty() || positions.empty()) throw Error(ErrorKind::InvalidParameter, "empty scale or position grid");
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (!(scales[i] > 0.0)) throw Error(ErrorKind::InvalidParameter, "wavelet scales must be positive");
    if (i > 0 && !(scales[i] > scales[i - 1])) {
      throw Error(ErrorKind::InvalidParameter, "wavelet scales must be increasing");
    }
  }
  const double s_min = scales.front();
  if (static_cast<double>(n) < 4.0 * s_min) {
    throw Error(ErrorKind::ScaleRange, "series shorter than 4 x smallest wavelet scale");
  }
  for (std::size_t k : positions) {
    if (k < 1 || k > n) throw Error(ErrorKind::Bounds, "wavelet position " + std::to_string(k) + " outside 1..N");
  }
  detail::require_finite(series.values);

  WaveletMap map;
  map.scales.assign(scales.begin(), scales.end());
  map.positions.assign(positions.begin(), positions.end());
  map.coefficients.assign(scales.size(), std::vector<double>(positions.size()));
  map.edge_affected.assign(scales.size(), std::vector<bool>(positions.size()));

  std::vector<double> kernel;
  for (std::size_t si = 0; si < scales.size(); ++si) {
    const double s = scales[si];
    const auto reach = static_cast<std::ptrdiff_t>(std::floor(kWaveletSupport * s));
    // kernel[d + reach] = psi(d / s), d = j - k
    kernel.resize(static_cast<std::size_t>(2 * reach + 1));
    for (std::ptrdiff_t d = -reach; d <= reach; ++d) {
      kernel[static_cast<std::size_t>(d + reach)] = mother_wavelet(static_cast<double>(d) / s);
    }
    const double norm = 1.0 / std::sqrt(s);
    for (std::size_t pi = 0; pi < positions.size(); ++pi) {
      const auto k = static_cast<std::ptrdiff_t>(positions[pi]);
      const std::ptrdiff_t j_lo = std::max<std::ptrdiff_t>(1, k - reach);
      const std::ptrdiff_t j_hi = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(n), k + reach);
      double acc = 0.0;
      for (std::ptrdiff_t j = j_lo; j <= j_hi; ++j) {
        acc += series.values[static_cast<std::size_t>(j - 1)] * kernel[static_cast<std::size_t>(j - k + reach)];
      }
      map.coefficients[si][pi] = norm * acc;
      map.edge_affected[si][pi] = (k - reach < 1) || (k + reach > static_cast<std::ptrdiff_t>(n));
    }
  }
  return map;
}

/// `count` log-spaced scales in [lo, hi].
inline std::vector<double> log_spaced_wavelet_scales(double lo, double hi, std::size_t count = 50) {
  if (!(lo > 0.0 && hi > lo) || count < 2) throw Error(ErrorKind::InvalidParameter, "invalid wavelet scale range");
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(count - 1));
  }
  return out;
}

/// Default grid: 50 scales in [4, N/10]; every position up to 10^4 points,
/// evenly thinned beyond that.
inline std::vector<double> default_wavelet_scales(std::size_t n) {
  return log_spaced_wavelet_scales(4.0, std::max(8.0, static_cast<double>(n) / 10.0), 50);
}

inline std::vector<std::size_t> default_wavelet_positions(std::size_t n, std::size_t max_points = 10000) {
  const std::size_t step = std::max<std::size_t>(1, (n + max_points - 1) / max_points);
  std::vector<std::size_t> out;
  for (std::size_t k = 1; k <= n; k += step) out.push_back(k);
  return out;
}

}  // namespace textfract
