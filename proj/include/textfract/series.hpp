#pragma once

// Numeric series, profiles, surrogates and synthetic generators with known
// scaling exponents.

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "textfract/detail/fft.hpp"
#include "textfract/detail/rng.hpp"
#include "textfract/error.hpp"

namespace textfract {

namespace provenance {
struct Empirical {};
struct Shuffled {
  std::uint64_t seed;
};
struct PhaseRandomized {
  std::uint64_t seed;
};
struct Synthetic {
  std::string kind;
  std::map<std::string, double> params;
  std::uint64_t seed;
};
}  // namespace provenance

using Provenance = std::variant<provenance::Empirical, provenance::Shuffled,
                                provenance::PhaseRandomized, provenance::Synthetic>;

struct Series {
  std::vector<double> values;
  Provenance provenance = provenance::Empirical{};

  std::size_t size() const noexcept { return values.size(); }
};

inline Series make_series(std::vector<double> values) { return Series{std::move(values), provenance::Empirical{}}; }

struct Profile {
  std::vector<double> values;  // L(j) = sum_{k<=j} (x_k - mean)
  double mean_removed = 0.0;

  std::size_t size() const noexcept { return values.size(); }
};

namespace detail {

inline void require_finite(std::span<const double> v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      throw Error(ErrorKind::InvalidParameter, "non-finite value at index " + std::to_string(i));
    }
  }
}

inline double mean(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

}  // namespace detail

inline Profile profile(const Series& s) {
  if (s.size() < 2) throw Error(ErrorKind::TooShort, "profile needs at least 2 values");
  detail::require_finite(s.values);
  Profile p;
  p.mean_removed = detail::mean(s.values);
  p.values.resize(s.size());
  double acc = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    acc += s.values[j] - p.mean_removed;
    p.values[j] = acc;
  }
  return p;
}

/// Seeded Fisher-Yates permutation; the multiset of values is untouched.
inline Series shuffle_surrogate(const Series& s, std::uint64_t seed) {
  Series out{s.values, provenance::Shuffled{seed}};
  textfract::detail::Rng rng(seed);
  for (std::size_t i = out.values.size(); i > 1; --i) {
    const std::size_t j = rng.below(i);
    std::swap(out.values[i - 1], out.values[j]);
  }
  return out;
}

/// Fourier-amplitude-preserving surrogate with uniformly random phases.
///
/// Bins 1..ceil(n/2)-1 receive a phase drawn on [0, 2*pi); the DC bin and,
/// for even n, the Nyquist bin are real and kept as they are. Hermitian
/// symmetry follows from the real-to-complex layout, so the inverse is real.
inline Series phase_randomized_surrogate(const Series& s, std::uint64_t seed) {
  const std::size_t n = s.size();
  if (n < 4) throw Error(ErrorKind::TooShort, "phase randomization needs at least 4 values");
  textfract::detail::require_finite(s.values);
  auto spec = textfract::detail::rfft(s.values);
  textfract::detail::Rng rng(seed);
  const std::size_t last = (n % 2 == 0) ? n / 2 - 1 : n / 2;
  for (std::size_t k = 1; k <= last; ++k) {
    const double phase = 2.0 * std::numbers::pi * rng.uniform();
    spec[k] = std::polar(std::abs(spec[k]), phase);
  }
  return Series{textfract::detail::irfft(spec, n), provenance::PhaseRandomized{seed}};
}

/// Deterministic binomial multiplicative cascade of 2^levels points.
///
/// Point i (zero-based) carries p^{n1} (1-p)^{levels-n1}, n1 = popcount(i).
/// The values sum to one.
inline Series generate_binomial_cascade(double p, int levels) {
  if (!(p > 0.0 && p <= 0.5)) throw Error(ErrorKind::InvalidParameter, "cascade p must lie in (0, 0.5]");
  if (levels < 1 || levels > 24) throw Error(ErrorKind::InvalidParameter, "cascade levels must lie in [1, 24]");
  const std::size_t n = std::size_t{1} << levels;
  std::vector<double> weight(static_cast<std::size_t>(levels) + 1);
  for (int ones = 0; ones <= levels; ++ones) {
    weight[static_cast<std::size_t>(ones)] = std::pow(p, ones) * std::pow(1.0 - p, levels - ones);
  }
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = weight[static_cast<std::size_t>(std::popcount(static_cast<std::uint64_t>(i)))];
  }
  return Series{std::move(v), provenance::Synthetic{"binomial_cascade", {{"p", p}, {"levels", levels}}, 0}};
}

/// Analytic generalized Hurst exponent of the binomial cascade.
inline double binomial_cascade_hurst(double p, double q) {
  if (q == 0.0) {
    // limit q -> 0 of 1/q - log2(p^q + (1-p)^q)/q
    return -(std::log2(p) + std::log2(1.0 - p)) / 2.0;
  }
  return 1.0 / q - std::log2(std::pow(p, q) + std::pow(1.0 - p, q)) / q;
}

/// Stationary Gaussian noise with spectral density proportional to f^{-(2H-1)}.
///
/// Spectral synthesis: each positive-frequency bin gets independent Gaussian
/// real and imaginary parts scaled by sqrt(S(f)), the DC bin is zero, and the
/// inverse transform is standardized to zero mean and unit variance.
inline Series generate_fgn(double hurst, std::size_t n, std::uint64_t seed) {
  if (!(hurst > 0.0 && hurst < 1.0)) throw Error(ErrorKind::InvalidParameter, "H must lie in (0, 1)");
  if (n < 64) throw Error(ErrorKind::InvalidParameter, "fGn length must be at least 64");
  const double beta = 2.0 * hurst - 1.0;
  textfract::detail::Rng rng(seed);
  std::vector<std::complex<double>> spec(n / 2 + 1);
  for (std::size_t k = 1; k < spec.size(); ++k) {
    const double f = static_cast<double>(k) / static_cast<double>(n);
    const double amp = std::sqrt(std::pow(f, -beta) / 2.0);
    const double re = rng.gaussian();
    const double im = rng.gaussian();
    spec[k] = (n % 2 == 0 && k == n / 2) ? std::complex<double>(amp * std::sqrt(2.0) * re, 0.0)
                                          : std::complex<double>(amp * re, amp * im);
  }
  std::vector<double> v = textfract::detail::irfft(spec, n);
  const double m = detail::mean(v);
  double var = 0.0;
  for (double x : v) var += (x - m) * (x - m);
  const double sd = std::sqrt(var / static_cast<double>(n));
  for (double& x : v) x = (x - m) / sd;
  return Series{std::move(v), provenance::Synthetic{"fgn", {{"H", hurst}, {"n", static_cast<double>(n)}}, seed}};
}

struct GaussianDist {};
struct UniformIntegerDist {
  std::int64_t lo;
  std::int64_t hi;  // inclusive
};
using NoiseDistribution = std::variant<GaussianDist, UniformIntegerDist>;

inline Series generate_white_noise(std::size_t n, std::uint64_t seed, NoiseDistribution dist = GaussianDist{}) {
  if (n < 2) throw Error(ErrorKind::InvalidParameter, "white noise length must be at least 2");
  textfract::detail::Rng rng(seed);
  std::vector<double> v(n);
  provenance::Synthetic prov{"white_noise", {{"n", static_cast<double>(n)}}, seed};
  if (const auto* u = std::get_if<UniformIntegerDist>(&dist)) {
    if (u->hi < u->lo) throw Error(ErrorKind::InvalidParameter, "uniform integer range is empty");
    const auto width = static_cast<std::uint64_t>(u->hi - u->lo) + 1;
    for (double& x : v) x = static_cast<double>(u->lo + static_cast<std::int64_t>(rng.below(width)));
    prov.params["lo"] = static_cast<double>(u->lo);
    prov.params["hi"] = static_cast<double>(u->hi);
  } else {
    for (double& x : v) x = rng.gaussian();
  }
  return Series{std::move(v), std::move(prov)};
}

}  // namespace textfract
