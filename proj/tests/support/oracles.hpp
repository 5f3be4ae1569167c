#pragma once

// Slow, independent reference computations used only by the tests.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

/// O(N^2) DFT, X_k = sum_j x_j exp(-2 pi i k j / N), all N bins.
inline std::vector<std::complex<double>> direct_dft(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double ang = -2.0 * std::numbers::pi * static_cast<double>((k * j) % n) / static_cast<double>(n);
      acc += x[j] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
  return out;
}

inline std::vector<double> cumsum_demeaned(const std::vector<double>& x) {
  long double mean = 0.0L;
  for (double v : x) mean += v;
  mean /= static_cast<long double>(x.size());
  std::vector<double> out;
  long double acc = 0.0L;
  for (double v : x) {
    acc += static_cast<long double>(v) - mean;
    out.push_back(static_cast<double>(acc));
  }
  return out;
}

/// Solve A c = b by Gaussian elimination with partial pivoting (long double).
inline std::vector<long double> solve(std::vector<std::vector<long double>> a, std::vector<long double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    }
    std::swap(a[col], a[piv]);
    std::swap(b[col], b[piv]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const long double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<long double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    long double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  return x;
}

/// Mean squared residual of the order-m least-squares polynomial in k = 1..s,
/// through the normal equations on centred abscissae.
inline double polyfit_residual(const std::vector<double>& y, int m) {
  const std::size_t s = y.size();
  const long double c = (static_cast<long double>(s) + 1.0L) / 2.0L;
  const std::size_t d = static_cast<std::size_t>(m) + 1;
  std::vector<std::vector<long double>> ata(d, std::vector<long double>(d, 0.0L));
  std::vector<long double> atb(d, 0.0L);
  for (std::size_t k = 0; k < s; ++k) {
    const long double x = static_cast<long double>(k + 1) - c;
    std::vector<long double> pw(2 * d);
    pw[0] = 1.0L;
    for (std::size_t e = 1; e < 2 * d; ++e) pw[e] = pw[e - 1] * x;
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t cc = 0; cc < d; ++cc) ata[r][cc] += pw[r + cc];
      atb[r] += pw[r] * y[k];
    }
  }
  const auto coef = solve(ata, atb);
  long double ss = 0.0L;
  for (std::size_t k = 0; k < s; ++k) {
    const long double x = static_cast<long double>(k + 1) - c;
    long double p = 0.0L, xp = 1.0L;
    for (std::size_t e = 0; e < d; ++e) {
      p += coef[e] * xp;
      xp *= x;
    }
    ss += (y[k] - p) * (y[k] - p);
  }
  return static_cast<double>(ss / static_cast<long double>(s));
}

/// h(q) of the binomial cascade from the partition function
/// tau(q) = -log2(p^q + (1-p)^q), h = (tau + 1)/q, with the q -> 0 limit.
inline double cascade_h(double p, double q) {
  if (std::fabs(q) < 1e-12) {
    return -0.5 * (std::log(p) + std::log(1.0 - p)) / std::log(2.0);
  }
  const double tau = -std::log(std::pow(p, q) + std::pow(1.0 - p, q)) / std::log(2.0);
  return (tau + 1.0) / q;
}

/// Composite Simpson rule on [a, b] with an even number of panels.
template <typename F>
double simpson(F f, double a, double b, std::size_t panels = 20000) {
  if (panels % 2) ++panels;
  const double h = (b - a) / static_cast<double>(panels);
  double acc = f(a) + f(b);
  for (std::size_t i = 1; i < panels; ++i) acc += f(a + h * static_cast<double>(i)) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

/// Integer lengths drawn by inverse transform from the continuous survival
/// F(x) = exp(-mu x^b), then ceiled, so Pr(L >= l) = F(l - 1).
inline std::vector<double> stretched_exponential_sample(double mu, double b, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> out(n);
  for (auto& v : out) {
    double r = u(gen);
    while (r <= 0.0) r = u(gen);
    v = std::ceil(std::pow(-std::log(r) / mu, 1.0 / b));
    if (v < 1.0) v = 1.0;
  }
  return out;
}

}  // namespace oracle
