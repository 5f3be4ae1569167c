#pragma once

// Multifractal detrended fluctuation analysis.
//
// Pipeline: series -> profile -> F^2(nu, s) over 2*M_s segments laid from
// both ends -> F_q(s) -> h(q) by log-log regression -> (alpha, f(alpha)).
//
// The detrended variance is the mean of *squared* residuals about the local
// polynomial trend, as the q-th order function raises it to q/2.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "textfract/detail/ols.hpp"
#include "textfract/error.hpp"
#include "textfract/series.hpp"

namespace textfract {

inline std::vector<double> make_q_grid(double q_min, double q_max, double step) {
  if (!(step > 0.0) || q_max < q_min) throw Error(ErrorKind::InvalidParameter, "invalid q grid");
  const auto count = static_cast<std::size_t>(std::floor((q_max - q_min) / step + 1e-9)) + 1;
  std::vector<double> q(count);
  for (std::size_t i = 0; i < count; ++i) {
    q[i] = q_min + step * static_cast<double>(i);
    if (std::abs(q[i]) < 1e-12) q[i] = 0.0;
  }
  return q;
}

/// q = -4, -3.75, ..., 4.
inline std::vector<double> default_q_grid() { return make_q_grid(-4.0, 4.0, 0.25); }

/// About `count` log-spaced integer scales in [s_min, s_max], deduplicated.
inline std::vector<std::size_t> log_spaced_scales(std::size_t s_min, std::size_t s_max, std::size_t count = 30) {
  if (s_min < 1 || s_max < s_min) {
    throw Error(ErrorKind::ScaleRange, "scale range [" + std::to_string(s_min) + ", " + std::to_string(s_max) +
                                           "] is empty");
  }
  std::vector<std::size_t> scales;
  if (count < 2 || s_min == s_max) {
    scales.push_back(s_min);
    if (s_max != s_min) scales.push_back(s_max);
    return scales;
  }
  const double lmin = std::log(static_cast<double>(s_min));
  const double lmax = std::log(static_cast<double>(s_max));
  for (std::size_t i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(count - 1);
    auto s = static_cast<std::size_t>(std::llround(std::exp(lmin + t * (lmax - lmin))));
    s = std::clamp(s, s_min, s_max);
    if (scales.empty() || s > scales.back()) scales.push_back(s);
  }
  return scales;
}

/// Default grid [20, N/5] with ~30 scales.
inline std::vector<std::size_t> default_scales(std::size_t series_length) {
  return log_spaced_scales(20, series_length / 5, 30);
}

namespace detail {

/// Orthonormal polynomial basis of degree <= m on s equispaced points.
class DetrendBasis {
 public:
  DetrendBasis(std::size_t s, int m) : s_(s) {
    if (m < 0) throw Error(ErrorKind::InvalidParameter, "detrend order must be non-negative");
    if (s <= static_cast<std::size_t>(m) + 1) {
      throw Error(ErrorKind::DegenerateFit, "segment of " + std::to_string(s) +
                                                " points cannot be detrended at order " + std::to_string(m));
    }
    const double half = (static_cast<double>(s) - 1.0) / 2.0;
    basis_.assign(static_cast<std::size_t>(m + 1), std::vector<double>(s));
    for (int d = 0; d <= m; ++d) {
      auto& v = basis_[static_cast<std::size_t>(d)];
      for (std::size_t k = 0; k < s; ++k) v[k] = std::pow((static_cast<double>(k) - half) / half, d);
      // Gram-Schmidt, two passes
      for (int pass = 0; pass < 2; ++pass) {
        for (int e = 0; e < d; ++e) {
          const auto& u = basis_[static_cast<std::size_t>(e)];
          double dot = 0.0;
          for (std::size_t k = 0; k < s; ++k) dot += u[k] * v[k];
          for (std::size_t k = 0; k < s; ++k) v[k] -= dot * u[k];
        }
      }
      double norm = 0.0;
      for (double x : v) norm += x * x;
      norm = std::sqrt(norm);
      for (double& x : v) x /= norm;
    }
  }

  std::size_t scale() const noexcept { return s_; }

  /// Mean squared residual of `y` after removing its projection on the basis.
  double residual_variance(std::span<const double> y, std::vector<double>& work) const {
    work.assign(y.begin(), y.end());
    for (const auto& u : basis_) {
      double dot = 0.0;
      for (std::size_t k = 0; k < s_; ++k) dot += u[k] * work[k];
      for (std::size_t k = 0; k < s_; ++k) work[k] -= dot * u[k];
    }
    double ss = 0.0;
    for (double r : work) ss += r * r;
    return ss / static_cast<double>(s_);
  }

 private:
  std::size_t s_;
  std::vector<std::vector<double>> basis_;
};

/// Start offset (zero-based) of segment nu in 1..2*M_s.
inline std::size_t segment_start(std::size_t n, std::size_t s, std::size_t nu) {
  const std::size_t ms = n / s;
  return nu <= ms ? (nu - 1) * s : n - (nu - ms) * s;
}

}  // namespace detail

/// F^2(nu, s): mean squared deviation of the profile from its order-m
/// least-squares polynomial on segment nu (1-based; 1..M_s from the start,
/// M_s+1..2*M_s from the end).
inline double detrended_variance(const Profile& p, std::size_t nu, std::size_t s, int m) {
  if (s <= static_cast<std::size_t>(std::max(m, 0)) + 1) {
    throw Error(ErrorKind::DegenerateFit, "scale " + std::to_string(s) + " too small for order " + std::to_string(m));
  }
  const std::size_t n = p.size();
  const std::size_t ms = s == 0 ? 0 : n / s;
  if (nu < 1 || nu > 2 * ms) {
    throw Error(ErrorKind::Bounds, "segment " + std::to_string(nu) + " outside 1.." + std::to_string(2 * ms));
  }
  detail::DetrendBasis basis(s, m);
  std::vector<double> work;
  const std::size_t start = detail::segment_start(n, s, nu);
  return basis.residual_variance(std::span<const double>(p.values).subspan(start, s), work);
}

struct FluctuationSurface {
  std::vector<double> q_values;
  std::vector<std::size_t> scales;
  std::vector<std::vector<double>> F;      // F[qi][si] = F_q(s)
  std::vector<std::size_t> n_segments;     // 2*M_s per scale
  int detrend_order = 2;
  std::size_t series_length = 0;

  double at(std::size_t qi, std::size_t si) const { return F[qi][si]; }
};

/// F_q(s) for every (q, s). q = 0 uses the logarithmic-average limit.
///
/// The q-th moments are accumulated in log space so large |q| neither
/// overflows nor underflows. Segments whose detrended variance is zero to
/// round-off raise SingularSegmentError when any q <= 0 is requested.
inline FluctuationSurface fluctuation_surface(const Series& series, std::span<const double> q_values,
                                              std::span<const std::size_t> scales, int m = 2) {
  if (q_values.empty()) throw Error(ErrorKind::InvalidParameter, "empty q grid");
  if (scales.empty()) throw Error(ErrorKind::ScaleRange, "empty scale grid");
  if (m < 0) throw Error(ErrorKind::InvalidParameter, "detrend order must be non-negative");
  for (std::size_t i = 1; i < scales.size(); ++i) {
    if (scales[i] <= scales[i - 1]) throw Error(ErrorKind::ScaleRange, "scales must be strictly increasing");
  }
  if (scales.front() <= static_cast<std::size_t>(m) + 2) {
    throw Error(ErrorKind::ScaleRange,
                "smallest scale must exceed detrend order + 2 (got " + std::to_string(scales.front()) + ")");
  }
  const std::size_t n = series.size();
  if (n < 4 * scales.back()) {
    throw Error(ErrorKind::ScaleRange, "series of length " + std::to_string(n) + " is shorter than 4 x max scale " +
                                           std::to_string(scales.back()));
  }
  const Profile prof = profile(series);
  double max_dev = 0.0;
  for (double x : series.values) max_dev = std::max(max_dev, std::abs(x - prof.mean_removed));
  const bool needs_positive = std::any_of(q_values.begin(), q_values.end(), [](double q) { return q <= 0.0; });

  FluctuationSurface out;
  out.q_values.assign(q_values.begin(), q_values.end());
  out.scales.assign(scales.begin(), scales.end());
  out.F.assign(q_values.size(), std::vector<double>(scales.size()));
  out.detrend_order = m;
  out.series_length = n;

  std::vector<double> work;
  std::vector<double> log_f2;
  for (std::size_t si = 0; si < scales.size(); ++si) {
    const std::size_t s = scales[si];
    const std::size_t segs = 2 * (n / s);
    out.n_segments.push_back(segs);
    const detail::DetrendBasis basis(s, m);
    // values at or below this are round-off in the cumulative sums
    const double floor_value = std::pow(1e-13 * static_cast<double>(s) * max_dev, 2);
    log_f2.resize(segs);
    for (std::size_t nu = 1; nu <= segs; ++nu) {
      const std::size_t start = detail::segment_start(n, s, nu);
      const double f2 = basis.residual_variance(std::span<const double>(prof.values).subspan(start, s), work);
      if (!(f2 > floor_value)) {
        if (needs_positive) throw SingularSegmentError(nu, s);
        log_f2[nu - 1] = -std::numeric_limits<double>::infinity();
      } else {
        log_f2[nu - 1] = std::log(f2);
      }
    }
    for (std::size_t qi = 0; qi < q_values.size(); ++qi) {
      const double q = q_values[qi];
      double log_fq;
      if (q == 0.0) {
        double sum = 0.0;
        for (double l : log_f2) sum += l;
        log_fq = 0.5 * sum / static_cast<double>(segs);
      } else {
        double amax = -std::numeric_limits<double>::infinity();
        for (double l : log_f2) amax = std::max(amax, 0.5 * q * l);
        if (!std::isfinite(amax)) throw SingularSegmentError(1, s);
        double acc = 0.0;
        for (double l : log_f2) acc += std::exp(0.5 * q * l - amax);
        log_fq = (amax + std::log(acc / static_cast<double>(segs))) / q;
      }
      out.F[qi][si] = std::exp(log_fq);
    }
  }
  return out;
}

struct ScaleRange {
  double lo = 0.0;
  double hi = 0.0;
};

struct GeneralizedHurst {
  std::vector<double> q_values;
  std::vector<double> h;
  std::vector<double> h_stderr;
  ScaleRange fit_scale_range;
  std::size_t scales_used = 0;
  bool non_increasing = true;  // expected for multifractal-consistent surfaces
};

/// Default regression window [20, N/5].
inline ScaleRange default_hurst_fit_range(const FluctuationSurface& surf) {
  return {20.0, static_cast<double>(surf.series_length) / 5.0};
}

inline GeneralizedHurst fit_generalized_hurst(const FluctuationSurface& surf, ScaleRange range) {
  std::vector<double> log_s;
  std::vector<std::size_t> idx;
  for (std::size_t si = 0; si < surf.scales.size(); ++si) {
    const auto s = static_cast<double>(surf.scales[si]);
    if (s >= range.lo && s <= range.hi) {
      log_s.push_back(std::log(s));
      idx.push_back(si);
    }
  }
  if (idx.size() < 6) {
    throw Error(ErrorKind::InsufficientPoints, std::to_string(idx.size()) + " scales inside fit range [" +
                                                   std::to_string(range.lo) + ", " + std::to_string(range.hi) +
                                                   "], need 6");
  }
  GeneralizedHurst gh;
  gh.q_values = surf.q_values;
  gh.fit_scale_range = range;
  gh.scales_used = idx.size();
  std::vector<double> log_f(idx.size());
  for (std::size_t qi = 0; qi < surf.q_values.size(); ++qi) {
    for (std::size_t i = 0; i < idx.size(); ++i) log_f[i] = std::log(surf.F[qi][idx[i]]);
    const auto line = detail::fit_line(log_s, log_f);
    gh.h.push_back(line.slope);
    gh.h_stderr.push_back(line.slope_stderr);
  }
  for (std::size_t i = 1; i < gh.h.size(); ++i) {
    if (gh.q_values[i] > gh.q_values[i - 1] && gh.h[i] > gh.h[i - 1] + 1e-9) gh.non_increasing = false;
  }
  return gh;
}

inline GeneralizedHurst fit_generalized_hurst(const FluctuationSurface& surf) {
  return fit_generalized_hurst(surf, default_hurst_fit_range(surf));
}

struct SingularitySpectrum {
  std::vector<double> q_values;
  std::vector<double> alphas;
  std::vector<double> f_values;
  double delta_alpha = 0.0;
  double alpha_at_peak = 0.0;
  double alpha_min = 0.0;
  double alpha_max = 0.0;
  bool f_exceeds_one = false;  // f > 1 + 1e-6 somewhere; h(q) was not non-increasing
};

/// alpha = h + q h', f = q (alpha - h) + 1, with h' by finite differences
/// (central inside, one-sided at the ends). Requires a uniform q grid.
inline SingularitySpectrum singularity_spectrum(const GeneralizedHurst& gh) {
  const auto& q = gh.q_values;
  const std::size_t n = q.size();
  if (n < 5 || gh.h.size() != n) throw Error(ErrorKind::InsufficientPoints, "singularity spectrum needs >= 5 q values");
  const double step = q[1] - q[0];
  if (!(step > 0.0)) throw Error(ErrorKind::NonUniformGrid, "q grid must be increasing");
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs((q[i] - q[i - 1]) - step) > 1e-9 * std::max(1.0, std::abs(step))) {
      throw Error(ErrorKind::NonUniformGrid, "q grid is not uniform at index " + std::to_string(i));
    }
  }
  SingularitySpectrum out;
  out.q_values = q;
  out.alphas.resize(n);
  out.f_values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double dh;
    if (i == 0) {
      dh = (gh.h[1] - gh.h[0]) / step;
    } else if (i + 1 == n) {
      dh = (gh.h[n - 1] - gh.h[n - 2]) / step;
    } else {
      dh = (gh.h[i + 1] - gh.h[i - 1]) / (2.0 * step);
    }
    out.alphas[i] = gh.h[i] + q[i] * dh;
    out.f_values[i] = q[i] * (out.alphas[i] - gh.h[i]) + 1.0;
    if (out.f_values[i] > 1.0 + 1e-6) out.f_exceeds_one = true;
  }
  const auto [mn, mx] = std::minmax_element(out.alphas.begin(), out.alphas.end());
  out.alpha_min = *mn;
  out.alpha_max = *mx;
  out.delta_alpha = *mx - *mn;
  const auto peak = std::max_element(out.f_values.begin(), out.f_values.end());
  out.alpha_at_peak = out.alphas[static_cast<std::size_t>(peak - out.f_values.begin())];
  return out;
}

namespace detail {
inline std::size_t index_of_q2(const GeneralizedHurst& gh) {
  for (std::size_t i = 0; i < gh.q_values.size(); ++i) {
    if (std::abs(gh.q_values[i] - 2.0) < 1e-9) return i;
  }
  throw Error(ErrorKind::MissingQ, "q = 2 is not on the grid");
}
}  // namespace detail

/// Classical Hurst exponent H = h(2).
inline double hurst_exponent(const GeneralizedHurst& gh) { return gh.h[detail::index_of_q2(gh)]; }

/// Regression standard error of h(2).
inline double hurst_stderr(const GeneralizedHurst& gh) { return gh.h_stderr[detail::index_of_q2(gh)]; }

/// Spectral exponent implied by a Hurst exponent: beta = 2H - 1.
constexpr double beta_from_hurst(double hurst) noexcept { return 2.0 * hurst - 1.0; }

struct MfdfaConfig {
  std::vector<double> q_values = default_q_grid();
  std::size_t scale_min = 20;
  std::size_t scale_max = 0;  // 0 -> N/5
  std::size_t scale_count = 30;
  int detrend_order = 2;
  std::optional<ScaleRange> fit_range;  // default [scale_min, scale_max]
};

struct MfdfaResult {
  FluctuationSurface surface;
  GeneralizedHurst hurst;
  SingularitySpectrum spectrum;
};

inline MfdfaResult run_mfdfa(const Series& series, const MfdfaConfig& cfg = {}) {
  const std::size_t s_max = cfg.scale_max ? cfg.scale_max : series.size() / 5;
  const auto scales = log_spaced_scales(cfg.scale_min, s_max, cfg.scale_count);
  MfdfaResult r;
  r.surface = fluctuation_surface(series, cfg.q_values, scales, cfg.detrend_order);
  const ScaleRange range =
      cfg.fit_range.value_or(ScaleRange{static_cast<double>(cfg.scale_min), static_cast<double>(s_max)});
  r.hurst = fit_generalized_hurst(r.surface, range);
  r.spectrum = singularity_spectrum(r.hurst);
  return r;
}

}  // namespace textfract
