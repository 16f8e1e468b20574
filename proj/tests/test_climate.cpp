#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "l96sp/climate.hpp"
#include "l96sp/error.hpp"
#include "test_util.hpp"

using namespace l96sp;
using l96sp::testing::random_vector;

namespace {

double total(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

Trajectory series(const std::vector<double>& v) {
  Trajectory t;
  t.K = 1;
  t.dt_save = 0.005;
  t.data = v;
  return t;
}

}  // namespace

TEST(Histogram, SingleValueFillsOneBin) {
  const std::vector<double> v{0.37};
  const auto h = histogram(v, {0.0, 1.0, 10});
  for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(h.mass[i], i == 3 ? 1.0 : 0.0);
  EXPECT_EQ(h.count, 1u);
}

TEST(Histogram, UniformWithinMultinomialBound) {
  const std::size_t n = 1000000, bins = 100;
  const auto v = random_vector(n, 0.0, 1.0, 5);
  const auto h = histogram(v, {0.0, 1.0, bins});
  const double p = 1.0 / bins;
  const double sd = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  // 3 sigma per bin would fail about a quarter of the time over 100 bins;
  // the bound is applied to the largest deviation with a Bonferroni margin.
  double worst = 0.0;
  for (double m : h.mass) worst = std::max(worst, std::abs(m - p));
  EXPECT_LT(worst, 4.0 * sd);
  EXPECT_NEAR(total(h.mass), 1.0, 1e-12);
}

TEST(Histogram, OutOfRangeClampsAndCounts) {
  const std::vector<double> v{-5.0, 0.5, 1.5, 2.0, 9.0};
  const auto h = histogram(v, {0.0, 2.0, 4});
  EXPECT_EQ(h.below, 1u);
  EXPECT_EQ(h.above, 1u);  // the upper edge itself belongs to the last bin
  EXPECT_DOUBLE_EQ(h.mass[0], 0.2);
  EXPECT_DOUBLE_EQ(h.mass[1], 0.2);
  EXPECT_DOUBLE_EQ(h.mass[3], 0.6);
  EXPECT_NEAR(total(h.mass), 1.0, 1e-12);
  EXPECT_EQ(total(histogram(std::vector<double>{}, {0.0, 1.0, 4}).mass), 0.0);
}

TEST(Histogram, MassesSumToOne) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto v = random_vector(1000 + seed * 37, -20.0, 25.0, seed);
    EXPECT_NEAR(total(histogram(v, {-15.0, 20.0, 73}).mass), 1.0, 1e-12);
  }
  const auto x = random_vector(5000, -1.0, 1.0, 2);
  const auto y = random_vector(5000, -1.0, 1.0, 3);
  const auto h2 = histogram2d(x, y, {-0.5, 0.5, 13}, {-1.0, 1.0, 7});
  EXPECT_NEAR(total(h2.mass), 1.0, 1e-12);
  EXPECT_GT(h2.clamped, 0u);
}

TEST(Histogram, RejectsBadSpecs) {
  const std::vector<double> v{1.0};
  EXPECT_THROW(histogram(v, {1.0, 1.0, 10}), ConfigError);
  EXPECT_THROW(histogram(v, {0.0, 1.0, 0}), ConfigError);
}

TEST(Histogram, DefaultSpecPadsRange) {
  const std::vector<double> v{-10.0, 0.0, 10.0};
  const auto s = default_x_spec(v);
  EXPECT_DOUBLE_EQ(s.lo, -11.0);
  EXPECT_DOUBLE_EQ(s.hi, 11.0);
  EXPECT_EQ(s.bins, 100u);
  EXPECT_EQ(s.edges().size(), 101u);
}

TEST(Kl, IdenticalIsZero) {
  const std::vector<double> q{0.1, 0.0, 0.6, 0.3};
  EXPECT_EQ(kl_divergence(q, q), 0.0);
}

TEST(Kl, TwoBinExample) {
  const std::vector<double> q{0.5, 0.5}, p{0.25, 0.75};
  EXPECT_NEAR(kl_divergence(q, p), 0.5 * std::log(2.0) + 0.5 * std::log(2.0 / 3.0), 1e-15);
  EXPECT_NEAR(kl_divergence(q, p), 0.1438, 5e-5);
}

TEST(Kl, NonNegativeOnRandomPairs) {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    auto q = random_vector(12, 0.0, 1.0, seed, 1);
    auto p = random_vector(12, 0.0, 1.0, seed, 2);
    if (seed % 3 == 0) q[seed % 12] = 0.0;
    if (seed % 5 == 0) p[(seed + 1) % 12] = 0.0;
    const double sq = total(q), sp = total(p);
    for (auto& v : q) v /= sq;
    for (auto& v : p) v /= sp;
    EXPECT_GE(kl_divergence(q, p), 0.0);
  }
}

TEST(Kl, EmptyModelBinIsFloored) {
  const std::vector<double> q{0.5, 0.5}, p{1.0, 0.0};
  const double kl = kl_divergence(q, p, 1e-12);
  EXPECT_TRUE(std::isfinite(kl));
  EXPECT_GT(kl, 10.0);
  EXPECT_THROW(kl_divergence(q, std::vector<double>{1.0}), ConfigError);
}

TEST(Smoothing, ConstantUnchanged) {
  const auto out = smooth_running_mean(series(std::vector<double>(50, 3.25)), 0.05);
  EXPECT_EQ(out.rows(), 41u);
  for (double v : out.data) EXPECT_DOUBLE_EQ(v, 3.25);
}

TEST(Smoothing, AlternatingCancels) {
  std::vector<double> v(100);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = i % 2 ? -1.0 : 1.0;
  const auto out = smooth_running_mean(series(v), 0.04);  // 8 rows
  for (double x : out.data) EXPECT_NEAR(x, 0.0, 1e-15);
}

TEST(Smoothing, SineAttenuationMatchesSinc) {
  const double dt = 0.005, window = 0.4, period = 5.0;
  const std::size_t T = 20000;
  std::vector<double> v(T);
  for (std::size_t i = 0; i < T; ++i) v[i] = std::sin(2.0 * std::numbers::pi * i * dt / period);
  const auto out = smooth_running_mean(series(v), window);
  double amp = 0.0;
  for (double x : out.data) amp = std::max(amp, std::abs(x));
  const double arg = std::numbers::pi * window / period;
  EXPECT_NEAR(amp, std::sin(arg) / arg, 0.01 * std::sin(arg) / arg);
  EXPECT_NEAR(out.t0, 0.5 * 79 * dt, 1e-15);
}

TEST(Smoothing, RejectsBadWindows) {
  const auto t = series(std::vector<double>(10, 1.0));
  EXPECT_THROW(smooth_running_mean(t, 0.001), ConfigError);
  EXPECT_THROW(smooth_running_mean(t, 1.0), ConfigError);
}

TEST(Fifths, StationaryRunIsStable) {
  const auto truth = random_vector(50000, -1.0, 1.0, 1);
  const auto model = random_vector(50000, -1.0, 1.0, 2);
  const auto kls = fifths_kl(truth, model, {-1.0, 1.0, 20});
  ASSERT_EQ(kls.size(), 5u);
  for (double k : kls) EXPECT_LT(k, 0.01);
}
