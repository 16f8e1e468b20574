#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "l96sp/error.hpp"
#include "l96sp/gru.hpp"
#include "l96sp/poly_model.hpp"
#include "l96sp/rnn_model.hpp"
#include "test_util.hpp"

using namespace l96sp;
using l96sp::testing::random_vector;
using l96sp::testing::truth_run;

namespace {

double sig(double a) { return 1.0 / (1.0 + std::exp(-a)); }

// Independent GRU evaluation with explicit indexing.
std::vector<double> gru_oracle(const std::vector<double>& w, const std::vector<double>& u,
                               const std::vector<double>& b, int I, int H,
                               const std::vector<double>& in, const std::vector<double>& h) {
  auto W = [&](int gate, int i, int j) { return w[static_cast<std::size_t>((gate * H + i) * I + j)]; };
  auto U = [&](int gate, int i, int j) { return u[static_cast<std::size_t>((gate * H + i) * H + j)]; };
  std::vector<double> z(H), r(H), out(H);
  for (int i = 0; i < H; ++i) {
    double az = 0.0, ar = 0.0;
    for (int j = 0; j < I; ++j) {
      az += W(0, i, j) * in[j];
      ar += W(1, i, j) * in[j];
    }
    for (int j = 0; j < H; ++j) {
      az += U(0, i, j) * h[j];
      ar += U(1, i, j) * h[j];
    }
    z[i] = sig(az + b[i]);
    r[i] = sig(ar + b[H + i]);
  }
  for (int i = 0; i < H; ++i) {
    double ac = 0.0;
    for (int j = 0; j < I; ++j) ac += W(2, i, j) * in[j];
    for (int j = 0; j < H; ++j) ac += U(2, i, j) * (r[j] * h[j]);
    const double c = std::tanh(ac + b[2 * H + i]);
    out[i] = (1.0 - z[i]) * h[i] + z[i] * c;
  }
  return out;
}

RnnModel random_rnn(std::uint64_t seed, RnnArch arch = {}, NormStats norm = {}) {
  RnnModel m(arch, norm);
  auto p = m.params();
  const auto v = random_vector(p.size(), -0.6, 0.6, seed);
  std::copy(v.begin(), v.end(), p.begin());
  m.set_sigma(0.7);
  return m;
}

double g_oracle(const RnnModel& m, double x) {
  const auto& n = m.norm();
  const int W = m.arch().g_width;
  auto w1 = m.block("g.w1"), b1 = m.block("g.b1"), w2 = m.block("g.w2"), b2 = m.block("g.b2"),
       w3 = m.block("g.w3"), b3 = m.block("g.b3");
  const double xs = (x - n.x_mean) / n.x_sd;
  std::vector<double> h1(W);
  for (int i = 0; i < W; ++i) h1[i] = std::tanh(w1[i] * xs + b1[i]);
  double out = 0.0;
  for (int i = 0; i < W; ++i) {
    double a = 0.0;
    for (int j = 0; j < W; ++j) a += w2[static_cast<std::size_t>(i * W + j)] * h1[j];
    out += w3[i] * std::tanh(a + b2[i]);
  }
  return n.r_mean + n.r_sd * (out + b3[0]);
}

}  // namespace

TEST(Gru, ZeroWeightsHalveState) {
  const int I = 2, H = 3;
  std::vector<double> w(3 * H * I, 0.0), u(3 * H * H, 0.0), b(3 * H, 0.0);
  GruView g{I, H, w.data(), u.data(), b.data()};
  const std::vector<double> in{0.4, -1.3};
  const std::vector<double> h{0.2, -0.8, 1.6};
  std::vector<double> out(H);
  gru_cell(g, in, h, out);
  for (int i = 0; i < H; ++i) EXPECT_DOUBLE_EQ(out[i], 0.5 * h[i]);
}

TEST(Gru, MatchesScalarOracle) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const int I = 3, H = 4;
    const auto w = random_vector(3 * H * I, -1.0, 1.0, seed, 1);
    const auto u = random_vector(3 * H * H, -1.0, 1.0, seed, 2);
    const auto b = random_vector(3 * H, -0.5, 0.5, seed, 3);
    const auto in = random_vector(I, -2.0, 2.0, seed, 4);
    const auto h = random_vector(H, -1.0, 1.0, seed, 5);
    GruView g{I, H, w.data(), u.data(), b.data()};
    std::vector<double> out(H);
    gru_cell(g, in, h, out);
    const auto expect = gru_oracle(w, u, b, I, H, in, h);
    for (int i = 0; i < H; ++i) EXPECT_EQ(out[i], expect[i]);
  }
}

TEST(Gru, BackwardMatchesFiniteDifferences) {
  const int I = 2, H = 3;
  auto w = random_vector(3 * H * I, -1.0, 1.0, 9, 1);
  auto u = random_vector(3 * H * H, -1.0, 1.0, 9, 2);
  auto b = random_vector(3 * H, -0.5, 0.5, 9, 3);
  auto in = random_vector(I, -1.5, 1.5, 9, 4);
  auto h = random_vector(H, -1.0, 1.0, 9, 5);
  const auto d_out = random_vector(H, -1.0, 1.0, 9, 6);

  auto loss = [&]() {
    GruView g{I, H, w.data(), u.data(), b.data()};
    std::vector<double> out(H);
    gru_cell(g, in, h, out);
    double s = 0.0;
    for (int i = 0; i < H; ++i) s += d_out[i] * out[i];
    return s;
  };

  GruView g{I, H, w.data(), u.data(), b.data()};
  GruCache cache;
  std::vector<double> out(H);
  gru_cell(g, in, h, out, &cache);
  std::vector<double> gw(w.size(), 0.0), gu(u.size(), 0.0), gb(b.size(), 0.0);
  std::vector<double> d_in(I, 0.0), d_h(H, 0.0);
  gru_backward(g, cache, in, h, d_out, d_in, d_h, GruGrad{gw.data(), gu.data(), gb.data()});

  const double eps = 1e-6;
  auto check = [&](std::vector<double>& v, const std::vector<double>& grad) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double keep = v[i];
      v[i] = keep + eps;
      const double up = loss();
      v[i] = keep - eps;
      const double down = loss();
      v[i] = keep;
      EXPECT_NEAR(grad[i], (up - down) / (2 * eps), 1e-7);
    }
  };
  check(w, gw);
  check(u, gu);
  check(b, gb);
  check(in, d_in);
  check(h, d_h);
}

TEST(RnnModel, ZeroWeightHiddenUpdateHalvesState) {
  RnnModel m;
  const int H = m.arch().gru_units;
  auto l = random_vector(2 * H, -1.0, 1.0, 3);
  const auto before = l;
  rnn_hidden_update(m, l, 2.5);
  for (int i = 0; i < 2 * H; ++i) EXPECT_DOUBLE_EQ(l[i], 0.5 * before[i]);
}

TEST(RnnModel, HiddenUpdateComposesTwoLayers) {
  NormStats norm{0.3, 2.0, 0.5, 1.7};
  RnnModel m = random_rnn(11, {}, norm);
  const int H = m.arch().gru_units;
  auto l = random_vector(2 * H, -1.0, 1.0, 4);
  const double r = 0.9;
  auto blk = [&](const char* name) {
    auto s = m.block(name);
    return std::vector<double>(s.begin(), s.end());
  };
  const std::vector<double> l1_in(l.begin(), l.begin() + H), l2_in(l.begin() + H, l.end());
  const auto l1 = gru_oracle(blk("s1.w"), blk("s1.u"), blk("s1.b"), 1, H, {r / norm.r_sd}, l1_in);
  const auto l2 = gru_oracle(blk("s2.w"), blk("s2.u"), blk("s2.b"), H, H, l1, l2_in);
  rnn_hidden_update(m, l, r);
  for (int i = 0; i < H; ++i) {
    EXPECT_EQ(l[i], l1[i]);
    EXPECT_EQ(l[H + i], l2[i]);
  }
}

TEST(RnnModel, ResidualMeanIsAffineInState) {
  NormStats norm{0.0, 1.0, 0.0, 2.0};
  RnnModel m = random_rnn(5, {}, norm);
  const int n = m.arch().hidden_size();
  const auto w = m.block("b.w");
  const double bias = m.block("b.b")[0];
  std::vector<double> zero(n, 0.0);
  EXPECT_DOUBLE_EQ(rnn_residual_mean(m, zero), 2.0 * bias);
  const auto l = random_vector(n, -1.0, 1.0, 6);
  double dot = 0.0;
  for (int i = 0; i < n; ++i) dot += w[i] * l[i];
  EXPECT_NEAR(rnn_residual_mean(m, l), 2.0 * (dot + bias), 1e-14);

  const auto l2 = random_vector(n, -1.0, 1.0, 7);
  std::vector<double> sum(n);
  for (int i = 0; i < n; ++i) sum[i] = l[i] + l2[i];
  EXPECT_NEAR(rnn_residual_mean(m, sum),
              rnn_residual_mean(m, l) + rnn_residual_mean(m, l2) - 2.0 * bias, 1e-13);
}

TEST(RnnModel, SubgridMatchesOracle) {
  RnnModel m = random_rnn(8, {}, {1.0, 3.0, -0.5, 2.0});
  for (double x : {-12.0, -3.3, 0.0, 1.0, 7.5, 15.0}) EXPECT_EQ(rnn_subgrid_g(m, x), g_oracle(m, x));

  RnnModel zero({}, {1.0, 3.0, -0.5, 2.0});
  EXPECT_DOUBLE_EQ(rnn_subgrid_g(zero, 4.0), -0.5);
}

TEST(RnnModel, StepWithZeroNetworkIsRk2PlusNoise) {
  RnnModel m;
  m.set_sigma(0.3);
  const auto x0 = random_vector(8, -5.0, 10.0, 12);
  const auto z = random_vector(8, -2.0, 2.0, 13);
  auto x = x0;
  auto hs = HiddenState::zeros(8, m.arch().hidden_size());
  ASSERT_TRUE(rnn_step(m, x, hs, 20.0, z));
  const auto omega = rk2_omega(x0, 20.0, 0.005);
  for (int k = 0; k < 8; ++k) {
    EXPECT_DOUBLE_EQ(hs.r[k], 0.3 * z[k]);
    EXPECT_NEAR(x[k], x0[k] + omega[k] - 0.005 * 0.3 * z[k], 1e-13);
  }
}

TEST(RnnModel, TinyNetworkHandEvaluation) {
  NormStats norm{0.5, 2.0, 0.25, 1.5};
  RnnModel m({1, 1}, norm);
  auto set = [&](const char* name, std::vector<double> v) {
    auto b = m.block(name);
    ASSERT_EQ(b.size(), v.size());
    std::copy(v.begin(), v.end(), b.begin());
  };
  set("g.w1", {0.8});
  set("g.b1", {-0.1});
  set("g.w2", {1.2});
  set("g.b2", {0.05});
  set("g.w3", {-0.7});
  set("g.b3", {0.3});
  set("s1.w", {0.0, 0.0, 0.0});
  set("s1.u", {0.0, 0.0, 0.0});
  set("s1.b", {0.4, 0.0, -0.6});
  set("s2.w", {0.9, 0.0, 1.1});
  set("s2.u", {0.0, 0.0, 0.0});
  set("s2.b", {-0.2, 0.0, 0.1});
  set("b.w", {0.5, -1.5});
  set("b.b", {0.2});
  m.set_sigma(0.4);

  const auto x0 = random_vector(8, -4.0, 8.0, 21);
  const auto z = random_vector(8, -1.0, 1.0, 22);
  auto x = x0;
  auto hs = HiddenState::zeros(8, 2);
  ASSERT_TRUE(rnn_step(m, x, hs, 18.0, z));

  const double l1 = sig(0.4) * std::tanh(-0.6);
  const double l2 = sig(0.9 * l1 - 0.2) * std::tanh(1.1 * l1 + 0.1);
  const double mean = 1.5 * (0.5 * l1 - 1.5 * l2 + 0.2);
  const auto omega = rk2_omega(x0, 18.0, 0.005);
  for (int k = 0; k < 8; ++k) {
    const double xs = (x0[k] - 0.5) / 2.0;
    const double g = 0.25 + 1.5 * (-0.7 * std::tanh(1.2 * std::tanh(0.8 * xs - 0.1) + 0.05) + 0.3);
    const double r = mean + 0.4 * z[k];
    EXPECT_NEAR(hs.l[2 * k], l1, 1e-15);
    EXPECT_NEAR(hs.l[2 * k + 1], l2, 1e-15);
    EXPECT_NEAR(hs.r[k], r, 1e-14);
    EXPECT_NEAR(x[k], x0[k] + omega[k] - 0.005 * (g + r), 1e-12);
  }
}

TEST(RnnModel, StepIsDeterministic) {
  RnnModel m = random_rnn(31);
  const auto x0 = random_vector(8, -5.0, 10.0, 32);
  auto run = [&]() {
    auto x = x0;
    auto hs = HiddenState::zeros(8, m.arch().hidden_size());
    auto streams = std::vector<RngStream>{};
    for (int k = 0; k < 8; ++k) streams.emplace_back(99, static_cast<std::uint64_t>(k));
    for (int n = 0; n < 200; ++n) rnn_step(m, x, hs, 20.0, streams);
    return x;
  };
  EXPECT_EQ(run(), run());
}

TEST(RnnModel, StepCommutesWithCyclicShift) {
  RnnModel m = random_rnn(41);
  const int K = 8, Hs = m.arch().hidden_size();
  const auto x0 = random_vector(K, -5.0, 10.0, 42);
  auto hs0 = HiddenState::zeros(K, Hs);
  hs0.l = random_vector(hs0.l.size(), -0.5, 0.5, 43);
  hs0.r = random_vector(K, -1.0, 1.0, 44);
  const auto z = random_vector(K, -2.0, 2.0, 45);

  auto shift = [&](const std::vector<double>& v, int width) {
    std::vector<double> out(v.size());
    for (int k = 0; k < K; ++k)
      for (int i = 0; i < width; ++i)
        out[static_cast<std::size_t>(((k + 1) % K) * width + i)] = v[static_cast<std::size_t>(k * width + i)];
    return out;
  };

  auto xa = x0;
  auto ha = hs0;
  rnn_step(m, xa, ha, 20.0, z);

  auto xb = shift(x0, 1);
  auto hb = hs0;
  hb.l = shift(hs0.l, Hs);
  hb.r = shift(hs0.r, 1);
  rnn_step(m, xb, hb, 20.0, shift(z, 1));

  EXPECT_EQ(shift(xa, 1), xb);
  EXPECT_EQ(shift(ha.l, Hs), hb.l);
  EXPECT_EQ(shift(ha.r, 1), hb.r);
}

TEST(RnnModel, SigmaRoundTripsThroughLog) {
  RnnModel m;
  m.set_sigma(2.5);
  EXPECT_NEAR(m.sigma(), 2.5, 1e-15);
  EXPECT_THROW(m.set_sigma(0.0), ConfigError);
  EXPECT_THROW(RnnModel({0, 4}), ConfigError);
  EXPECT_THROW(RnnModel({16, kMaxGruUnits + 1}), ConfigError);
}

TEST(WarmStart, ZeroSpinupGivesZeroState) {
  const auto traj = truth_run(20.0, 1.0, 3, 1.0);
  RnnModel m = random_rnn(50);
  const auto hs = warm_start(m, traj, traj.rows(), 20.0, 0);
  EXPECT_TRUE(std::all_of(hs.l.begin(), hs.l.end(), [](double v) { return v == 0.0; }));
  EXPECT_TRUE(std::all_of(hs.r.begin(), hs.r.end(), [](double v) { return v == 0.0; }));
}

TEST(WarmStart, ShortHistoryThrows) {
  const auto traj = truth_run(20.0, 0.25, 3, 1.0);
  RnnModel m = random_rnn(50);
  EXPECT_THROW(warm_start(m, traj, traj.rows(), 20.0, traj.rows()), ConfigError);
  EXPECT_NO_THROW(warm_start(m, traj, traj.rows(), 20.0, traj.rows() - 1));
}

TEST(WarmStart, MatchesManualThreading) {
  const auto traj = truth_run(20.0, 2.0, 5, 1.0);
  NormStats norm{2.0, 4.0, 0.5, 3.0};
  RnnModel m = random_rnn(51, {}, norm);
  const std::size_t end = 300, spin = 40;
  const auto hs = warm_start(m, traj, end, 20.0, spin);

  const int Hs = m.arch().hidden_size();
  for (int k = 0; k < traj.K; ++k) {
    std::vector<double> l(Hs, 0.0);
    double r = 0.0;
    for (std::size_t t = end - spin - 1; t + 1 < end; ++t) {
      const auto xt = traj.row(t);
      const auto xn = traj.row(t + 1);
      const auto omega = rk2_omega(xt, 20.0, 0.005);
      rnn_hidden_update(m, l, r);
      r = (xt[k] + omega[k] - xn[k]) / 0.005 - rnn_subgrid_g(m, xt[k]);
    }
    for (int i = 0; i < Hs; ++i) EXPECT_EQ(hs.l_of(k)[i], l[i]);
    EXPECT_EQ(hs.r[k], r);
  }
}

TEST(PolyModel, ZeroCoefficientsAndSigmaGiveRk2) {
  PolyModel m;
  const auto x0 = random_vector(8, -5.0, 10.0, 60);
  auto x = x0;
  auto st = PolyState::fresh(8);
  const std::vector<double> z(8, 1.7);
  ASSERT_TRUE(poly_step(m, x, st, 20.0, z));
  const auto omega = rk2_omega(x0, 20.0, 0.005);
  for (int k = 0; k < 8; ++k) EXPECT_DOUBLE_EQ(x[k], x0[k] + omega[k]);
}

TEST(PolyModel, CubicTendencyEnters) {
  PolyModel m{0.01, -0.02, 0.5, 0.8};
  const auto x0 = random_vector(8, -5.0, 10.0, 61);
  auto x = x0;
  auto st = PolyState::fresh(8);
  const std::vector<double> z(8, 0.0);
  poly_step(m, x, st, 20.0, z);
  const auto omega = rk2_omega(x0, 20.0, 0.005);
  for (int k = 0; k < 8; ++k) {
    const double p = 0.01 * std::pow(x0[k], 3) - 0.02 * x0[k] * x0[k] + 0.5 * x0[k] + 0.8;
    EXPECT_NEAR(x[k], x0[k] + omega[k] - 0.005 * p, 1e-12);
  }
}

TEST(PolyModel, NoiseChainHasAr1Statistics) {
  PolyModel m;
  m.ar1 = {0.5, 1.3};
  const int K = 8;
  std::vector<RngStream> streams;
  for (int k = 0; k < K; ++k) streams.emplace_back(7, static_cast<std::uint64_t>(k));
  auto st = PolyState::fresh(K);
  std::vector<double> x(K, 0.0);
  double s = 0.0, s2 = 0.0, lag = 0.0;
  std::size_t n = 0;
  std::vector<double> prev(K, 0.0);
  for (int t = 0; t < 100000; ++t) {
    std::fill(x.begin(), x.end(), 0.0);
    poly_step(m, x, st, 0.0, streams);
    for (int k = 0; k < K; ++k) {
      const double h = st.h[k];
      s += h;
      s2 += h * h;
      if (t > 0) lag += h * prev[k];
      prev[k] = h;
      ++n;
    }
  }
  const double var = s2 / static_cast<double>(n);
  EXPECT_NEAR(s / static_cast<double>(n), 0.0, 0.02);
  EXPECT_NEAR(var, 1.69, 0.02 * 1.69);
  EXPECT_NEAR(lag / static_cast<double>(n - K) / var, 0.5, 0.01);
}

TEST(PolyModel, WarmStartRecoversLastNoise) {
  PolyModel m{0.002, 0.01, -0.3, 0.4, {0.9, 1.0}};
  const auto x0 = random_vector(8, -5.0, 10.0, 70);
  auto x = x0;
  auto st = PolyState::fresh(8);
  Trajectory traj;
  traj.K = 8;
  traj.F = 20.0;
  traj.dt_save = 0.005;
  traj.append(x);
  std::vector<RngStream> streams;
  for (int k = 0; k < 8; ++k) streams.emplace_back(3, static_cast<std::uint64_t>(k));
  for (int t = 0; t < 5; ++t) {
    poly_step(m, x, st, 20.0, streams);
    traj.append(x);
  }
  const auto warm = poly_warm_start(m, traj, traj.rows(), 20.0);
  EXPECT_TRUE(warm.primed);
  for (int k = 0; k < 8; ++k) EXPECT_NEAR(warm.h[k], st.h[k], 1e-9);
  EXPECT_FALSE(poly_warm_start(m, traj, 1, 20.0).primed);
}

TEST(PolyModel, ValidationRejectsBadFields) {
  PolyModel m;
  m.dt = 0.0;
  EXPECT_THROW(m.validate(), ConfigError);
  m.dt = 0.005;
  m.ar1.phi = 1.0;
  EXPECT_THROW(m.validate(), ConfigError);
}
