#include "l96sp/rnn_grad.hpp"

#include <cmath>
#include <numbers>

namespace l96sp {

std::vector<Window> make_windows(const ResidualDataset& ds, std::size_t seq_len) {
  std::vector<Window> out;
  if (seq_len == 0) return out;
  for (const auto& seg : ds.segments)
    for (std::size_t off = 0; off + seq_len <= seg.length; off += seq_len)
      out.push_back({seg.start + off, seq_len});
  return out;
}

namespace {

const double kHalfLog2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

/// Forward activations of one scalar sequence, kept for the reverse pass.
class SequenceTape {
 public:
  explicit SequenceTape(const RnnModel& m) : m_(m) {}

  /// Runs the forward pass; returns the summed negative log-density.
  double forward(const ResidualDataset& ds, const Window& w, int k) {
    const int H = m_.arch().gru_units;
    const int W = m_.arch().g_width;
    const auto& L = m_.layout();
    const double* p = m_.params().data();
    const auto& ns = m_.norm();
    const double sigma = m_.sigma();
    n_ = w.length;
    const auto Hn = static_cast<std::size_t>(H);
    const auto Wn = static_cast<std::size_t>(W);
    l1_.assign((n_ + 1) * Hn, 0.0);
    l2_.assign((n_ + 1) * Hn, 0.0);
    c1_.resize(n_);
    c2_.resize(n_);
    in_.assign(n_, 0.0);
    e_.assign(n_, 0.0);
    xs_.assign(n_, 0.0);
    h1_.assign(n_ * Wn, 0.0);
    h2_.assign(n_ * Wn, 0.0);

    double nll = 0.0;
    double r_prev = 0.0;
    for (std::size_t t = 0; t < n_; ++t) {
      in_[t] = r_prev / ns.r_sd;
      gru_cell(m_.gru1(), {&in_[t], 1}, {&l1_[t * Hn], Hn}, {&l1_[(t + 1) * Hn], Hn}, &c1_[t]);
      gru_cell(m_.gru2(), {&l1_[(t + 1) * Hn], Hn}, {&l2_[t * Hn], Hn}, {&l2_[(t + 1) * Hn], Hn},
               &c2_[t]);
      double acc = 0.0;
      for (int i = 0; i < H; ++i) acc += p[L.b_w + i] * l1_[(t + 1) * Hn + i];
      for (int i = 0; i < H; ++i) acc += p[L.b_w + H + i] * l2_[(t + 1) * Hn + i];
      const double mu = ns.r_sd * (acc + p[L.b_b]);

      const double x = ds.x(w.row + t, k);
      xs_[t] = (x - ns.x_mean) / ns.x_sd;
      double* h1 = &h1_[t * Wn];
      double* h2 = &h2_[t * Wn];
      for (int i = 0; i < W; ++i) h1[i] = std::tanh(p[L.g_w1 + i] * xs_[t] + p[L.g_b1 + i]);
      double o = 0.0;
      for (int i = 0; i < W; ++i) {
        const double* row = p + L.g_w2 + static_cast<std::ptrdiff_t>(i) * W;
        double a = 0.0;
        for (int j = 0; j < W; ++j) a += row[j] * h1[j];
        h2[i] = std::tanh(a + p[L.g_b2 + i]);
        o += p[L.g_w3 + i] * h2[i];
      }
      const double g = ns.r_mean + ns.r_sd * (o + p[L.g_b3]);
      const double r = ds.r(w.row + t, k) - g;
      e_[t] = (r - mu) / sigma;
      nll += 0.5 * e_[t] * e_[t] + std::log(sigma) + kHalfLog2Pi;
      r_prev = r;
    }
    return nll;
  }

  /// Accumulates scale * d(nll)/d(params) into grad.
  void backward(double scale, std::vector<double>& grad) const {
    const int H = m_.arch().gru_units;
    const int W = m_.arch().g_width;
    const auto& L = m_.layout();
    const double* p = m_.params().data();
    const auto& ns = m_.norm();
    const double sigma = m_.sigma();
    const auto Hn = static_cast<std::size_t>(H);
    const auto Wn = static_cast<std::size_t>(W);
    double* G = grad.data();
    const GruGrad g1{G + L.s1_w, G + L.s1_u, G + L.s1_b};
    const GruGrad g2{G + L.s2_w, G + L.s2_u, G + L.s2_b};

    double dl1_carry[kMaxGruUnits] = {};
    double dl2_carry[kMaxGruUnits] = {};
    double dh1[kMaxSubgridWidth];
    double dr_next = 0.0;
    for (std::size_t t = n_; t-- > 0;) {
      const double de = scale * e_[t] / sigma;
      const double dr = de + dr_next;
      const double dmu = -de;
      G[L.log_sigma] += scale * (1.0 - e_[t] * e_[t]);

      // g network: r = r_hat - g, g = r_mean + r_sd * o.
      const double d_o = -dr * ns.r_sd;
      const double* h1 = &h1_[t * Wn];
      const double* h2 = &h2_[t * Wn];
      G[L.g_b3] += d_o;
      for (int j = 0; j < W; ++j) dh1[j] = 0.0;
      for (int i = 0; i < W; ++i) {
        G[L.g_w3 + i] += d_o * h2[i];
        const double da2 = d_o * p[L.g_w3 + i] * (1.0 - h2[i] * h2[i]);
        G[L.g_b2 + i] += da2;
        const std::ptrdiff_t row = static_cast<std::ptrdiff_t>(i) * W;
        for (int j = 0; j < W; ++j) {
          G[L.g_w2 + row + j] += da2 * h1[j];
          dh1[j] += p[L.g_w2 + row + j] * da2;
        }
      }
      for (int j = 0; j < W; ++j) {
        const double da1 = dh1[j] * (1.0 - h1[j] * h1[j]);
        G[L.g_w1 + j] += da1 * xs_[t];
        G[L.g_b1 + j] += da1;
      }

      // b layer.
      const double dacc = dmu * ns.r_sd;
      G[L.b_b] += dacc;
      double dl1[kMaxGruUnits];
      double dl2[kMaxGruUnits];
      for (int i = 0; i < H; ++i) {
        G[L.b_w + i] += dacc * l1_[(t + 1) * Hn + i];
        G[L.b_w + H + i] += dacc * l2_[(t + 1) * Hn + i];
        dl1[i] = dl1_carry[i] + dacc * p[L.b_w + i];
        dl2[i] = dl2_carry[i] + dacc * p[L.b_w + H + i];
      }

      // GRU layer 2, then layer 1.
      for (int i = 0; i < H; ++i) dl2_carry[i] = 0.0;
      gru_backward(m_.gru2(), c2_[t], {&l1_[(t + 1) * Hn], Hn}, {&l2_[t * Hn], Hn}, {dl2, Hn},
                   {dl1, Hn}, {dl2_carry, Hn}, g2);
      for (int i = 0; i < H; ++i) dl1_carry[i] = 0.0;
      double d_in = 0.0;
      gru_backward(m_.gru1(), c1_[t], {&in_[t], 1}, {&l1_[t * Hn], Hn}, {dl1, Hn}, {&d_in, 1},
                   {dl1_carry, Hn}, g1);
      dr_next = d_in / ns.r_sd;
    }
  }

 private:
  const RnnModel& m_;
  std::size_t n_ = 0;
  std::vector<double> l1_, l2_, in_, e_, xs_, h1_, h2_;
  std::vector<GruCache> c1_, c2_;
};

std::size_t term_count(const ResidualDataset& ds, std::span<const Window> windows) {
  std::size_t n = 0;
  for (const auto& w : windows) n += w.length;
  return n * static_cast<std::size_t>(ds.K);
}

}  // namespace

double rnn_loss(const RnnModel& m, const ResidualDataset& ds, std::span<const Window> windows) {
  const std::size_t terms = term_count(ds, windows);
  if (terms == 0) return 0.0;
  SequenceTape tape(m);
  double nll = 0.0;
  for (const auto& w : windows)
    for (int k = 0; k < ds.K; ++k) nll += tape.forward(ds, w, k);
  return nll / static_cast<double>(terms) + std::log(m.dt());
}

LossGrad rnn_grad(const RnnModel& m, const ResidualDataset& ds, std::span<const Window> windows) {
  LossGrad out;
  out.grad.assign(m.params().size(), 0.0);
  const std::size_t terms = term_count(ds, windows);
  if (terms == 0) return out;
  const double scale = 1.0 / static_cast<double>(terms);
  SequenceTape tape(m);
  double nll = 0.0;
  for (const auto& w : windows) {
    for (int k = 0; k < ds.K; ++k) {
      nll += tape.forward(ds, w, k);
      tape.backward(scale, out.grad);
    }
  }
  out.loss = nll * scale + std::log(m.dt());
  return out;
}

}  // namespace l96sp
