#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "l96sp/ar1.hpp"
#include "l96sp/error.hpp"
#include "l96sp/rng.hpp"

using namespace l96sp;

TEST(Gaussian, MomentsOverMillionDraws) {
  RngStream rng(2024, 0);
  const int n = 1000000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.gaussian();
    s += z;
    s2 += z * z;
  }
  const double mean = s / n;
  const double var = s2 / n - mean * mean;
  EXPECT_NEAR(mean, 0.0, 0.005);
  EXPECT_NEAR(var, 1.0, 0.01);
}

TEST(Gaussian, KolmogorovSmirnov) {
  RngStream rng(77, 3);
  const std::size_t n = 1000000;
  std::vector<double> z(n);
  for (auto& v : z) v = rng.gaussian();
  std::sort(z.begin(), z.end());
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double cdf = 0.5 * std::erfc(-z[i] / std::sqrt(2.0));
    d = std::max({d, cdf - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - cdf});
  }
  EXPECT_LT(d, 0.002);
}

TEST(Gaussian, ReplayIsIdentical) {
  RngStream a(5, 9), b(5, 9);
  for (int i = 0; i < 1001; ++i) ASSERT_EQ(a.gaussian(), b.gaussian());
  RngStream c(5, 9), d(5, 9);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(c.uniform(), d.uniform());
}

TEST(Gaussian, SubstreamsAreUncorrelated) {
  RngStream a(5, 0), b(5, 1), c(6, 0);
  const int n = 100000;
  double sab = 0.0, sac = 0.0;
  for (int i = 0; i < n; ++i) {
    const double za = a.gaussian();
    sab += za * b.gaussian();
    sac += za * c.gaussian();
  }
  EXPECT_LT(std::abs(sab / n), 0.01);
  EXPECT_LT(std::abs(sac / n), 0.01);
  RngStream x(5, 0), y(5, 1);
  EXPECT_NE(x.gaussian(), y.gaussian());
}

TEST(Uniform, InUnitInterval) {
  RngStream rng(1, 1);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Ar1, TrivialCases) {
  EXPECT_EQ(ar1_step(0.0, {0.9, 2.0}, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(ar1_step(5.0, {0.0, 2.0}, 0.7), 1.4);
  EXPECT_DOUBLE_EQ(ar1_step(2.0, {0.5, 1.0}, 1.0), 1.0 + std::sqrt(0.75));
}

TEST(Ar1, Validation) {
  EXPECT_THROW((Ar1Params{1.0, 1.0}.validate()), ConfigError);
  EXPECT_THROW((Ar1Params{-1.0, 1.0}.validate()), ConfigError);
  EXPECT_THROW((Ar1Params{0.5, -1.0}.validate()), ConfigError);
  EXPECT_NO_THROW((Ar1Params{0.99, 0.0}.validate()));
}

namespace {

void check_chain(double phi, double sigma, std::uint64_t seed) {
  RngStream rng(seed, 0);
  const Ar1Params p{phi, sigma};
  const int n = 1000000;
  double h = sigma * rng.gaussian();
  double s = 0.0, s2 = 0.0, lag = 0.0, prev = h;
  for (int i = 0; i < n; ++i) {
    s += h;
    s2 += h * h;
    if (i > 0) lag += h * prev;
    prev = h;
    h = ar1_step(h, p, rng.gaussian());
  }
  const double var = s2 / n;
  EXPECT_NEAR(lag / (n - 1) / var, phi, 0.01) << "phi=" << phi;
  EXPECT_NEAR(var / (sigma * sigma), 1.0, 0.02) << "phi=" << phi;
}

}  // namespace

TEST(Ar1, ChainStatistics) {
  check_chain(0.985, 1.5, 1);
  check_chain(0.3, 0.5, 2);
  check_chain(0.0, 2.0, 3);
}

TEST(Ar1, StationaryFromFirstDraw) {
  // h_1 = sigma z_1 makes every marginal N(0, sigma^2).
  const Ar1Params p{0.9, 1.7};
  const int chains = 100000;
  std::vector<double> h(chains);
  std::vector<double> var_at;
  for (int c = 0; c < chains; ++c) {
    RngStream rng(11, static_cast<std::uint64_t>(c));
    h[static_cast<std::size_t>(c)] = p.sigma * rng.gaussian();
  }
  RngStream shared(12, 0);
  for (int t = 0; t < 10; ++t) {
    double s2 = 0.0;
    for (double v : h) s2 += v * v;
    var_at.push_back(s2 / chains);
    for (auto& v : h) v = ar1_step(v, p, shared.gaussian());
  }
  for (double v : var_at) EXPECT_NEAR(v / (p.sigma * p.sigma), 1.0, 0.02);
}
