#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "l96sp/error.hpp"
#include "l96sp/poly_fit.hpp"
#include "l96sp/residuals.hpp"
#include "test_util.hpp"

using namespace l96sp;
using l96sp::testing::truth_run;

namespace {

// Residuals drawn from a known cubic plus AR1 noise, with x uniform.
ResidualDataset synthetic(double a, double b, double c, double d, Ar1Params ar, std::size_t rows,
                          int K, std::uint64_t seed) {
  ResidualDataset ds;
  ds.K = K;
  ds.dt = 0.005;
  RngStream rng(seed, 0);
  std::vector<double> h(static_cast<std::size_t>(K));
  for (auto& v : h) v = ar.sigma * rng.gaussian();
  for (std::size_t t = 0; t < rows; ++t) {
    for (int k = 0; k < K; ++k) {
      const double x = -10.0 + 25.0 * rng.uniform();
      if (t > 0) h[k] = ar1_step(h[k], ar, rng.gaussian());
      ds.x_inputs.push_back(x);
      ds.r_targets.push_back(((a * x + b) * x + c) * x + d + h[k]);
    }
  }
  ds.segments.push_back({0, rows, 20.0});
  return ds;
}

}  // namespace

TEST(PolyFit, RecoversKnownCubicAndNoise) {
  const auto ds = synthetic(-0.00235, -0.0136, 1.3, 0.341, {0.98, 1.74}, 40000, 8, 11);
  const auto m = fit_polynomial(ds);
  EXPECT_NEAR(m.a, -0.00235, 2e-4);
  EXPECT_NEAR(m.b, -0.0136, 2e-3);
  EXPECT_NEAR(m.c, 1.3, 2e-2);
  EXPECT_NEAR(m.d, 0.341, 0.1);
  EXPECT_NEAR(m.ar1.phi, 0.98, 0.01);
  EXPECT_NEAR(m.ar1.sigma, 1.74, 0.05);
  EXPECT_EQ(m.dt, 0.005);
  EXPECT_EQ(m.F, 20.0);
  EXPECT_EQ(m.diagnostics.at("points").get<std::size_t>(), 40000u * 8u);
}

TEST(PolyFit, NoiselessDataIsExact) {
  const auto ds = synthetic(0.01, -0.2, 0.7, 1.1, {0.0, 0.0}, 200, 4, 2);
  const auto m = fit_polynomial(ds);
  EXPECT_NEAR(m.a, 0.01, 1e-12);
  EXPECT_NEAR(m.b, -0.2, 1e-11);
  EXPECT_NEAR(m.c, 0.7, 1e-10);
  EXPECT_NEAR(m.d, 1.1, 1e-9);
  EXPECT_NEAR(m.ar1.sigma, 0.0, 1e-9);
  EXPECT_NEAR(m.diagnostics.at("r2").get<double>(), 1.0, 1e-12);
}

TEST(PolyFit, ZeroTargetsGiveZeroModel) {
  auto ds = synthetic(0.0, 0.0, 0.0, 0.0, {0.0, 0.0}, 100, 4, 3);
  std::fill(ds.r_targets.begin(), ds.r_targets.end(), 0.0);
  const auto m = fit_polynomial(ds);
  EXPECT_EQ(m.a, 0.0);
  EXPECT_EQ(m.b, 0.0);
  EXPECT_EQ(m.c, 0.0);
  EXPECT_EQ(m.d, 0.0);
  EXPECT_EQ(m.ar1.sigma, 0.0);
  EXPECT_EQ(m.ar1.phi, 0.0);
}

TEST(PolyFit, DuplicatedDatasetGivesSameFit) {
  const auto traj = truth_run(20.0, 5.0, 4, 2.0);
  const auto once = fit_polynomial(extract_residuals(traj));
  ResidualDataset twice;
  twice.append(traj);
  twice.append(traj);
  ASSERT_EQ(twice.segments.size(), 2u);
  const auto m = fit_polynomial(twice);
  EXPECT_NEAR(m.a, once.a, 1e-10);
  EXPECT_NEAR(m.b, once.b, 1e-9);
  EXPECT_NEAR(m.c, once.c, 1e-8);
  EXPECT_NEAR(m.d, once.d, 1e-8);
  EXPECT_NEAR(m.ar1.phi, once.ar1.phi, 1e-12);
  EXPECT_NEAR(m.ar1.sigma, once.ar1.sigma, 1e-10);
}

TEST(PolyFit, DegenerateDesignThrows) {
  auto ds = synthetic(0.0, 0.0, 1.0, 0.0, {0.0, 0.0}, 50, 4, 4);
  std::fill(ds.x_inputs.begin(), ds.x_inputs.end(), 3.0);
  EXPECT_THROW(fit_polynomial(ds), NumericalError);
  EXPECT_THROW(fit_polynomial(ResidualDataset{}), ConfigError);
}

TEST(Residuals, ReconstructionRoundTrip) {
  const auto traj = truth_run(20.0, 2.0, 8, 1.0);
  const auto ds = extract_residuals(traj);
  ASSERT_EQ(ds.rows(), traj.rows() - 1);
  const auto back = reconstruct_trajectory(traj.row(0), ds);
  ASSERT_EQ(back.rows(), traj.rows());
  // Each step re-adds dt * r_hat, so rounding grows by about one ulp of x per step.
  for (std::size_t i = 0; i < traj.data.size(); ++i) EXPECT_NEAR(back.data[i], traj.data[i], 1e-10);
}

TEST(Residuals, SegmentsStayApart) {
  ResidualDataset ds;
  ds.append(truth_run(19.0, 0.5, 1, 1.0));
  ds.append(truth_run(21.0, 0.25, 2, 1.0));
  ASSERT_EQ(ds.segments.size(), 2u);
  EXPECT_EQ(ds.segments[0].start, 0u);
  EXPECT_EQ(ds.segments[1].start, ds.segments[0].length);
  EXPECT_EQ(ds.segments[1].F, 21.0);
  Trajectory other = truth_run(20.0, 0.25, 3, 1.0);
  other.dt_save = 0.01;
  EXPECT_THROW(ds.append(other), ConfigError);
}
