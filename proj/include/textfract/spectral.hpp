#pragma once

// Periodogram estimation, 1/f^beta fitting and corpus-averaged spectra.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "textfract/detail/fft.hpp"
#include "textfract/detail/ols.hpp"
#include "textfract/error.hpp"
#include "textfract/series.hpp"

namespace textfract {

struct PowerSpectrum {
  std::vector<double> freqs;  // k/N, k = 1..floor(N/2), cycles per sample
  std::vector<double> power;  // |X_k|^2
  double dc_power = 0.0;      // |X_0|^2, kept out of the fit support
  std::size_t n_samples = 0;  // N; for averaged spectra, the smallest member N
  std::size_t members = 1;

  std::size_t size() const noexcept { return freqs.size(); }

  /// Sum over all N DFT bins, reconstructed from the one-sided layout.
  double total_power() const {
    double sum = dc_power;
    for (std::size_t i = 0; i < power.size(); ++i) {
      const bool nyquist = (n_samples % 2 == 0) && (i + 1 == n_samples / 2);
      sum += nyquist ? power[i] : 2.0 * power[i];
    }
    return sum;
  }
};

struct SpectrumOptions {
  bool hann_window = false;
};

inline PowerSpectrum power_spectrum(const Series& s, SpectrumOptions opts = {}) {
  const std::size_t n = s.size();
  if (n < 8) throw Error(ErrorKind::TooShort, "power spectrum needs at least 8 values");
  detail::require_finite(s.values);
  std::vector<double> x = s.values;
  if (opts.hann_window) {
    for (std::size_t j = 0; j < n; ++j) {
      x[j] *= 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n));
    }
  }
  const auto spec = detail::rfft(x);
  PowerSpectrum ps;
  ps.n_samples = n;
  ps.dc_power = std::norm(spec[0]);
  const std::size_t half = n / 2;
  ps.freqs.resize(half);
  ps.power.resize(half);
  for (std::size_t k = 1; k <= half; ++k) {
    ps.freqs[k - 1] = static_cast<double>(k) / static_cast<double>(n);
    ps.power[k - 1] = std::norm(spec[k]);
  }
  return ps;
}

struct FrequencyRange {
  double lo = 0.0;
  double hi = 0.0;
};

/// Full positive support minus the top half-decade, where text spectra flatten.
inline FrequencyRange default_fit_range(const PowerSpectrum& ps) {
  if (ps.freqs.empty()) throw Error(ErrorKind::EmptyInput, "empty spectrum");
  return {ps.freqs.front(), ps.freqs.back() / std::sqrt(10.0)};
}

struct SpectrumFit {
  double beta = 0.0;
  double sigma_beta = 0.0;
  FrequencyRange fit_range;
  int bins_per_decade = 0;
  std::size_t points_used = 0;  // spectrum samples inside the range
  std::size_t bins_used = 0;    // occupied log bins entering the regression
  double r_squared = 0.0;
  double residual_variance = 0.0;  // of log10 S about the fitted line
  double intercept = 0.0;          // log10 S at f = 1

  std::string binning() const {
    return std::to_string(bins_per_decade) + " log bins/decade, geometric mean";
  }
};

/// Log-binned least-squares fit of log10 S = c - beta log10 f.
///
/// Points in [lo, hi] are grouped into bins of width 1/bins_per_decade decades
/// anchored at lo; each occupied bin contributes the geometric means of its
/// f and S values.
inline SpectrumFit fit_beta(const PowerSpectrum& ps, FrequencyRange range, int bins_per_decade = 20) {
  if (bins_per_decade < 1) throw Error(ErrorKind::InvalidParameter, "bins_per_decade must be positive");
  if (!(range.lo > 0.0 && range.lo < range.hi)) {
    throw Error(ErrorKind::InvalidParameter, "fit range must satisfy 0 < lo < hi");
  }
  // bin index -> (sum log f, sum log S, count)
  struct Bin {
    double log_f = 0.0;
    double log_s = 0.0;
    std::size_t count = 0;
  };
  std::vector<Bin> bins;
  std::size_t points = 0;
  const double log_lo = std::log10(range.lo);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const double f = ps.freqs[i];
    if (f < range.lo || f > range.hi) continue;
    if (!(ps.power[i] > 0.0)) {
      throw Error(ErrorKind::DegenerateFit, "zero power at f = " + std::to_string(f));
    }
    const double lf = std::log10(f);
    const auto b = static_cast<std::size_t>(std::floor((lf - log_lo) * bins_per_decade + 1e-12));
    if (b >= bins.size()) bins.resize(b + 1);
    bins[b].log_f += lf;
    bins[b].log_s += std::log10(ps.power[i]);
    ++bins[b].count;
    ++points;
  }
  if (points < 8) {
    throw Error(ErrorKind::InsufficientPoints,
                "only " + std::to_string(points) + " spectrum points inside the fit range (need 8)");
  }
  std::vector<double> x, y;
  for (const Bin& b : bins) {
    if (b.count == 0) continue;
    x.push_back(b.log_f / static_cast<double>(b.count));
    y.push_back(b.log_s / static_cast<double>(b.count));
  }
  if (x.size() < 3) {
    throw Error(ErrorKind::DegenerateFit, "fewer than 3 occupied frequency bins");
  }
  const auto line = detail::fit_line(x, y);
  SpectrumFit fit;
  fit.beta = -line.slope;
  fit.sigma_beta = line.slope_stderr;
  fit.fit_range = range;
  fit.bins_per_decade = bins_per_decade;
  fit.points_used = points;
  fit.bins_used = x.size();
  fit.r_squared = line.r_squared;
  fit.residual_variance = line.residual_variance;
  fit.intercept = line.intercept;
  return fit;
}

inline SpectrumFit fit_beta(const PowerSpectrum& ps, int bins_per_decade = 20) {
  return fit_beta(ps, default_fit_range(ps), bins_per_decade);
}

/// Geometric average of unit-normalized spectra on a shared log grid.
///
/// Each member is scaled to unit positive-frequency power, interpolated
/// linearly in log-log coordinates onto `grid_points` log-spaced frequencies
/// spanning the intersection of all supports, and averaged in log space.
inline PowerSpectrum average_spectrum(std::span<const PowerSpectrum> spectra, std::size_t grid_points = 200) {
  if (spectra.size() < 2) throw Error(ErrorKind::InsufficientPoints, "averaging needs at least 2 spectra");
  if (grid_points < 2) throw Error(ErrorKind::InvalidParameter, "grid needs at least 2 points");
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  std::size_t n_min = std::numeric_limits<std::size_t>::max();
  for (const auto& ps : spectra) {
    if (ps.size() < 2) throw Error(ErrorKind::InsufficientPoints, "member spectrum has fewer than 2 bins");
    lo = std::max(lo, ps.freqs.front());
    hi = std::min(hi, ps.freqs.back());
    n_min = std::min(n_min, ps.n_samples);
  }
  if (!(lo < hi)) throw Error(ErrorKind::EmptyIntersection, "frequency supports do not overlap");

  std::vector<double> grid(grid_points);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (std::size_t g = 0; g < grid_points; ++g) {
    const double t = static_cast<double>(g) / static_cast<double>(grid_points - 1);
    grid[g] = std::exp(llo + t * (lhi - llo));
  }
  grid.front() = lo;
  grid.back() = hi;

  std::vector<double> log_sum(grid_points, 0.0);
  for (const auto& ps : spectra) {
    double total = 0.0;
    for (double p : ps.power) total += p;
    if (!(total > 0.0)) throw Error(ErrorKind::DegenerateFit, "member spectrum has zero power");
    std::size_t i = 0;
    for (std::size_t g = 0; g < grid_points; ++g) {
      const double f = grid[g];
      while (i + 2 < ps.size() && ps.freqs[i + 1] < f) ++i;
      const double f0 = ps.freqs[i], f1 = ps.freqs[i + 1];
      const double p0 = ps.power[i] / total, p1 = ps.power[i + 1] / total;
      if (!(p0 > 0.0 && p1 > 0.0)) throw Error(ErrorKind::DegenerateFit, "zero power inside averaging support");
      const double t = (std::log(f) - std::log(f0)) / (std::log(f1) - std::log(f0));
      log_sum[g] += std::log(p0) + t * (std::log(p1) - std::log(p0));
    }
  }
  PowerSpectrum avg;
  avg.freqs = std::move(grid);
  avg.power.resize(grid_points);
  for (std::size_t g = 0; g < grid_points; ++g) {
    avg.power[g] = std::exp(log_sum[g] / static_cast<double>(spectra.size()));
  }
  avg.n_samples = n_min;
  avg.members = spectra.size();
  return avg;
}

}  // namespace textfract
