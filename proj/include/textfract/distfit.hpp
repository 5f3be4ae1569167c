#pragma once

// Empirical survival functions of sentence lengths and stretched-exponential
// tail fits F(l) = exp(-mu l^b).

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

/// F(l) = Pr(L >= l) at each distinct observed length.
struct CCDF {
  std::vector<double> lengths;   // ascending, distinct
  std::vector<double> survival;  // F at each length
  std::size_t n_samples = 0;

  std::size_t size() const noexcept { return lengths.size(); }
};

/// Survival function of the pooled multiset of values.
inline CCDF ccdf(std::span<const Series> pooled) {
  std::vector<double> all;
  for (const auto& s : pooled) all.insert(all.end(), s.values.begin(), s.values.end());
  if (all.empty()) throw Error(ErrorKind::EmptyInput, "no samples for the CCDF");
  detail::require_finite(all);
  std::sort(all.begin(), all.end());
  CCDF out;
  out.n_samples = all.size();
  const auto n = static_cast<double>(all.size());
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j] == all[i]) ++j;
    out.lengths.push_back(all[i]);
    out.survival.push_back(static_cast<double>(all.size() - i) / n);
    i = j;
  }
  return out;
}

inline CCDF ccdf(const Series& s) { return ccdf(std::span<const Series>(&s, 1)); }

struct TailFit {
  double mu = 0.0;
  double b = 0.0;
  double fit_lo = 0.0;  // lengths strictly above this enter the fit
  double fit_hi = 0.0;  // largest length used
  std::size_t points_used = 0;
  std::size_t excluded_unit_survival = 0;  // F = 1 points dropped from the range
  double residual = 0.0;                   // RMS of ln(-ln F) residuals
  double b_stderr = 0.0;
};

/// OLS on ln(-ln F) = ln mu + b ln l over distinct lengths in (tail_start, tail_end].
inline TailFit fit_stretched_exponential(const CCDF& c, double tail_start = 100.0,
                                         std::optional<double> tail_end = std::nullopt) {
  const double hi = tail_end.value_or(std::numeric_limits<double>::infinity());
  std::vector<double> x, y;
  TailFit fit;
  fit.fit_lo = tail_start;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double l = c.lengths[i];
    if (!(l > tail_start) || l > hi) continue;
    const double f = c.survival[i];
    if (f >= 1.0) {
      ++fit.excluded_unit_survival;
      continue;
    }
    if (!(f > 0.0) || !(l > 0.0)) continue;
    x.push_back(std::log(l));
    y.push_back(std::log(-std::log(f)));
    fit.fit_hi = l;
  }
  if (x.size() < 10) {
    throw Error(ErrorKind::InsufficientPoints, std::to_string(x.size()) + " distinct lengths above " +
                                                   std::to_string(tail_start) + " (need 10)");
  }
  const auto line = detail::fit_line(x, y);
  fit.b = line.slope;
  fit.mu = std::exp(line.intercept);
  fit.points_used = x.size();
  fit.b_stderr = line.slope_stderr;
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (line.intercept + line.slope * x[i]);
    sse += r * r;
  }
  fit.residual = std::sqrt(sse / static_cast<double>(x.size()));
  return fit;
}

}  // namespace textfract
