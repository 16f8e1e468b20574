#include "l96sp/rnn_model.hpp"

#include <cmath>

#include "l96sp/error.hpp"

namespace l96sp {

void RnnArch::validate() const {
  if (g_width < 1 || g_width > kMaxSubgridWidth)
    throw ConfigError("RnnArch: g_width must be in [1, " + std::to_string(kMaxSubgridWidth) + "]");
  if (gru_units < 1 || gru_units > kMaxGruUnits)
    throw ConfigError("RnnArch: gru_units must be in [1, " + std::to_string(kMaxGruUnits) + "]");
}

RnnLayout::RnnLayout(const RnnArch& arch) {
  arch.validate();
  const auto W = static_cast<std::size_t>(arch.g_width);
  const auto H = static_cast<std::size_t>(arch.gru_units);
  auto add = [&](const std::string& name, std::vector<std::size_t> shape) {
    std::size_t size = 1;
    for (auto d : shape) size *= d;
    blocks.push_back({name, std::move(shape), total, size});
    const std::size_t off = total;
    total += size;
    return off;
  };
  g_w1 = add("g.w1", {W, 1});
  g_b1 = add("g.b1", {W});
  g_w2 = add("g.w2", {W, W});
  g_b2 = add("g.b2", {W});
  g_w3 = add("g.w3", {1, W});
  g_b3 = add("g.b3", {1});
  s1_w = add("s1.w", {3 * H, 1});
  s1_u = add("s1.u", {3 * H, H});
  s1_b = add("s1.b", {3 * H});
  s2_w = add("s2.w", {3 * H, H});
  s2_u = add("s2.u", {3 * H, H});
  s2_b = add("s2.b", {3 * H});
  b_w = add("b.w", {1, 2 * H});
  b_b = add("b.b", {1});
  log_sigma = add("log_sigma", {1});
}

const RnnLayout::Block& RnnLayout::block(const std::string& name) const {
  for (const auto& b : blocks)
    if (b.name == name) return b;
  throw ConfigError("unknown RNN parameter block: " + name);
}

RnnModel::RnnModel(const RnnArch& arch, const NormStats& norm, double dt, double F_default)
    : arch_(arch), layout_(arch), norm_(norm), dt_(dt), F_default_(F_default),
      params_(layout_.total, 0.0) {
  if (!(dt > 0.0)) throw ConfigError("RnnModel: dt must be positive");
  if (!(norm.x_sd > 0.0) || !(norm.r_sd > 0.0))
    throw ConfigError("RnnModel: normalization sd must be positive");
}

std::span<const double> RnnModel::block(const std::string& name) const {
  const auto& b = layout_.block(name);
  return std::span<const double>(params_).subspan(b.offset, b.size);
}

std::span<double> RnnModel::block(const std::string& name) {
  const auto& b = layout_.block(name);
  return std::span<double>(params_).subspan(b.offset, b.size);
}

double RnnModel::sigma() const { return std::exp(params_[layout_.log_sigma]); }

void RnnModel::set_sigma(double sigma) {
  if (!(sigma > 0.0)) throw ConfigError("RnnModel: sigma must be positive");
  params_[layout_.log_sigma] = std::log(sigma);
}

GruView RnnModel::gru1() const {
  return {1, arch_.gru_units, params_.data() + layout_.s1_w, params_.data() + layout_.s1_u,
          params_.data() + layout_.s1_b};
}

GruView RnnModel::gru2() const {
  return {arch_.gru_units, arch_.gru_units, params_.data() + layout_.s2_w,
          params_.data() + layout_.s2_u, params_.data() + layout_.s2_b};
}

void RnnModel::init_glorot(std::uint64_t seed) {
  RngStream rng(seed, 0x9e3779b9ULL);
  std::fill(params_.begin(), params_.end(), 0.0);
  auto fill = [&](std::size_t offset, std::size_t rows, std::size_t cols) {
    const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
    for (std::size_t i = 0; i < rows * cols; ++i)
      params_[offset + i] = limit * (2.0 * rng.uniform() - 1.0);
  };
  const auto W = static_cast<std::size_t>(arch_.g_width);
  const auto H = static_cast<std::size_t>(arch_.gru_units);
  fill(layout_.g_w1, W, 1);
  fill(layout_.g_w2, W, W);
  fill(layout_.g_w3, 1, W);
  // Each gate block gets its own fan.
  for (std::size_t gate = 0; gate < 3; ++gate) {
    fill(layout_.s1_w + gate * H * 1, H, 1);
    fill(layout_.s1_u + gate * H * H, H, H);
    fill(layout_.s2_w + gate * H * H, H, H);
    fill(layout_.s2_u + gate * H * H, H, H);
  }
  fill(layout_.b_w, 1, 2 * H);
  params_[layout_.log_sigma] = std::log(norm_.r_sd);
  provenance["init"] = {{"scheme", "glorot_uniform"}, {"seed", seed}};
}

HiddenState HiddenState::zeros(int K, int hidden) {
  HiddenState hs;
  hs.K = K;
  hs.hidden = hidden;
  hs.l.assign(static_cast<std::size_t>(K) * static_cast<std::size_t>(hidden), 0.0);
  hs.r.assign(static_cast<std::size_t>(K), 0.0);
  return hs;
}

void rnn_hidden_update(const RnnModel& m, std::span<double> l, double r) {
  const int H = m.arch().gru_units;
  const double input = r / m.norm().r_sd;
  double l1[kMaxGruUnits];
  double l2[kMaxGruUnits];
  gru_cell(m.gru1(), {&input, 1}, l.subspan(0, H), {l1, static_cast<std::size_t>(H)});
  gru_cell(m.gru2(), {l1, static_cast<std::size_t>(H)}, l.subspan(H, H),
           {l2, static_cast<std::size_t>(H)});
  for (int i = 0; i < H; ++i) {
    l[i] = l1[i];
    l[H + i] = l2[i];
  }
}

double rnn_residual_mean(const RnnModel& m, std::span<const double> l) {
  const auto& L = m.layout();
  const double* w = m.params().data() + L.b_w;
  double acc = 0.0;
  for (std::size_t i = 0; i < l.size(); ++i) acc += w[i] * l[i];
  return m.norm().r_sd * (acc + m.params()[L.b_b]);
}

double rnn_subgrid_g(const RnnModel& m, double x) {
  const auto& L = m.layout();
  const double* p = m.params().data();
  const int W = m.arch().g_width;
  const double xs = (x - m.norm().x_mean) / m.norm().x_sd;
  double h1[kMaxSubgridWidth];
  for (int i = 0; i < W; ++i) h1[i] = std::tanh(p[L.g_w1 + i] * xs + p[L.g_b1 + i]);
  double out = 0.0;
  for (int i = 0; i < W; ++i) {
    const double* row = p + L.g_w2 + static_cast<std::ptrdiff_t>(i) * W;
    double a = 0.0;
    for (int j = 0; j < W; ++j) a += row[j] * h1[j];
    out += p[L.g_w3 + i] * std::tanh(a + p[L.g_b2 + i]);
  }
  return m.norm().r_mean + m.norm().r_sd * (out + p[L.g_b3]);
}

bool rnn_step(const RnnModel& m, std::span<double> x, HiddenState& hs, double F,
              std::span<const double> z) {
  const std::size_t K = x.size();
  std::vector<double> omega(K);
  std::vector<double> scratch(2 * K);
  rk2_omega(x, F, m.dt(), omega, scratch);
  const double sigma = m.sigma();
  for (std::size_t k = 0; k < K; ++k) {
    auto l = hs.l_of(static_cast<int>(k));
    rnn_hidden_update(m, l, hs.r[k]);
    const double r = rnn_residual_mean(m, l) + sigma * z[k];
    hs.r[k] = r;
    x[k] = x[k] + omega[k] - m.dt() * (rnn_subgrid_g(m, x[k]) + r);
  }
  return within_bounds(x);
}

bool rnn_step(const RnnModel& m, std::span<double> x, HiddenState& hs, double F,
              std::span<RngStream> streams) {
  std::vector<double> z(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) z[k] = streams[k].gaussian();
  return rnn_step(m, x, hs, F, z);
}

HiddenState warm_start(const RnnModel& m, const Trajectory& history, std::size_t end_row, double F,
                       std::size_t spinup) {
  HiddenState hs = HiddenState::zeros(history.K, m.arch().hidden_size());
  if (spinup == 0) return hs;
  if (end_row > history.rows() || end_row < spinup + 1)
    throw ConfigError("warm_start: history shorter than the spin-up window");
  const std::size_t K = static_cast<std::size_t>(history.K);
  std::vector<double> omega(K);
  std::vector<double> scratch(2 * K);
  for (std::size_t t = end_row - spinup - 1; t + 1 < end_row; ++t) {
    const auto xt = history.row(t);
    const auto xn = history.row(t + 1);
    rk2_omega(xt, F, m.dt(), omega, scratch);
    for (std::size_t k = 0; k < K; ++k) {
      const double r_hat = (xt[k] + omega[k] - xn[k]) / m.dt();
      auto l = hs.l_of(static_cast<int>(k));
      rnn_hidden_update(m, l, hs.r[k]);
      hs.r[k] = r_hat - rnn_subgrid_g(m, xt[k]);
    }
  }
  return hs;
}

}  // namespace l96sp
