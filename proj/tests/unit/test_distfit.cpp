#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "oracles.hpp"
#include "textfract/distfit.hpp"

using namespace textfract;

TEST(Ccdf, ThreePoints) {
  const auto c = ccdf(make_series({1, 2, 3}));
  EXPECT_EQ(c.lengths, (std::vector<double>{1, 2, 3}));
  EXPECT_DOUBLE_EQ(c.survival[0], 1.0);
  EXPECT_DOUBLE_EQ(c.survival[1], 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(c.survival[2], 1.0 / 3.0);
  EXPECT_EQ(c.n_samples, 3u);
}

TEST(Ccdf, PoolingWithSelfIsIdempotent) {
  const auto s = generate_white_noise(500, 3, UniformIntegerDist{1, 30});
  const std::vector<Series> twice{s, s};
  const auto a = ccdf(s);
  const auto b = ccdf(twice);
  EXPECT_EQ(a.lengths, b.lengths);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a.survival[i], b.survival[i], 1e-15);
  EXPECT_EQ(b.n_samples, 1000u);
}

TEST(Ccdf, PooledEqualsWeightedMembers) {
  const auto a = generate_white_noise(300, 1, UniformIntegerDist{1, 20});
  const auto b = generate_white_noise(700, 2, UniformIntegerDist{5, 40});
  const std::vector<Series> both{a, b};
  const auto pooled = ccdf(both);
  // brute force: count samples >= l over the merged multiset
  std::map<double, std::size_t> hist;
  for (const auto* s : {&a, &b}) {
    for (double v : s->values) ++hist[v];
  }
  std::size_t remaining = 1000;
  std::size_t i = 0;
  for (const auto& [l, count] : hist) {
    ASSERT_DOUBLE_EQ(pooled.lengths[i], l);
    EXPECT_NEAR(pooled.survival[i], static_cast<double>(remaining) / 1000.0, 1e-15);
    remaining -= count;
    ++i;
  }
  // and the sample-weighted member combination
  const auto ca = ccdf(a), cb = ccdf(b);
  auto at = [](const CCDF& c, double l) {
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (c.lengths[k] >= l) return c.survival[k];
    }
    return 0.0;
  };
  for (std::size_t k = 0; k < pooled.size(); ++k) {
    const double l = pooled.lengths[k];
    EXPECT_NEAR(pooled.survival[k], (300.0 * at(ca, l) + 700.0 * at(cb, l)) / 1000.0, 1e-12);
  }
}

TEST(Ccdf, InvariantsAndShuffle) {
  const auto s = generate_white_noise(2000, 4, UniformIntegerDist{1, 90});
  const auto c = ccdf(s);
  EXPECT_DOUBLE_EQ(c.survival.front(), 1.0);
  for (std::size_t i = 1; i < c.size(); ++i) {
    EXPECT_GT(c.lengths[i], c.lengths[i - 1]);
    EXPECT_LT(c.survival[i], c.survival[i - 1]);
    EXPECT_GT(c.survival[i], 0.0);
  }
  const auto sh = ccdf(shuffle_surrogate(s, 5));
  EXPECT_EQ(sh.lengths, c.lengths);
  EXPECT_EQ(sh.survival, c.survival);
}

TEST(Ccdf, EmptyInput) {
  const std::vector<Series> none;
  EXPECT_THROW(ccdf(none), Error);
}

namespace {

CCDF exact_stretched(double mu, double b, double lo, double hi) {
  CCDF c;
  for (double l = lo; l <= hi; l += 1.0) {
    c.lengths.push_back(l);
    c.survival.push_back(std::exp(-mu * std::pow(l, b)));
  }
  c.n_samples = c.lengths.size();
  return c;
}

}  // namespace

TEST(StretchedExponential, ExactValuesRecovered) {
  const auto fit = fit_stretched_exponential(exact_stretched(0.1, 0.7, 1, 400));
  EXPECT_NEAR(fit.b, 0.7, 1e-6);
  EXPECT_NEAR(fit.mu, 0.1, 1e-6);
  EXPECT_EQ(fit.points_used, 300u);
  EXPECT_DOUBLE_EQ(fit.fit_lo, 100.0);
  EXPECT_DOUBLE_EQ(fit.fit_hi, 400.0);
  EXPECT_LT(fit.residual, 1e-9);
}

TEST(StretchedExponential, PureExponentialGivesUnitB) {
  const auto fit = fit_stretched_exponential(exact_stretched(0.05, 1.0, 1, 60), 10.0, 100.0);
  EXPECT_NEAR(fit.b, 1.0, 1e-9);
}

TEST(StretchedExponential, SampledRecovery) {
  const auto v = oracle::stretched_exponential_sample(0.1, 0.7, 100000, 8);
  const auto fit = fit_stretched_exponential(ccdf(make_series(v)));
  EXPECT_NEAR(fit.b, 0.7, 0.05);
  EXPECT_NEAR(fit.mu, 0.1, 0.02);
}

TEST(StretchedExponential, HalfSubsampleStable) {
  const auto v = oracle::stretched_exponential_sample(0.1, 0.7, 100000, 9);
  const std::vector<double> half(v.begin(), v.begin() + 50000);
  const auto full = fit_stretched_exponential(ccdf(make_series(v)));
  const auto sub = fit_stretched_exponential(ccdf(make_series(half)));
  EXPECT_NEAR(sub.b, full.b, 0.1);
}

TEST(StretchedExponential, DuplicationInvariant) {
  const auto v = oracle::stretched_exponential_sample(0.2, 0.6, 20000, 10);
  auto doubled = v;
  doubled.insert(doubled.end(), v.begin(), v.end());
  const auto a = fit_stretched_exponential(ccdf(make_series(v)), 20.0);
  const auto b = fit_stretched_exponential(ccdf(make_series(doubled)), 20.0);
  EXPECT_NEAR(a.b, b.b, 1e-12);
  EXPECT_NEAR(a.mu, b.mu, 1e-12);
}

TEST(StretchedExponential, UnitSurvivalExcluded) {
  auto c = exact_stretched(0.1, 0.7, 101, 130);
  c.lengths.insert(c.lengths.begin(), 100.5);
  c.survival.insert(c.survival.begin(), 1.0);
  const auto fit = fit_stretched_exponential(c);
  EXPECT_EQ(fit.excluded_unit_survival, 1u);
  EXPECT_NEAR(fit.b, 0.7, 1e-6);
}

TEST(StretchedExponential, InsufficientTail) {
  try {
    fit_stretched_exponential(exact_stretched(0.1, 0.7, 1, 105));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InsufficientPoints);
  }
}
