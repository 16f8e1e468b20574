#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "l96sp/dynamics.hpp"
#include "l96sp/gru.hpp"
#include "l96sp/rng.hpp"

namespace l96sp {

inline constexpr int kMaxSubgridWidth = 256;

/// Network sizes. g: 1 -> g_width -> g_width -> 1 (tanh hidden layers),
/// s: two stacked GRU layers of gru_units each, b: 2*gru_units -> 1.
struct RnnArch {
  int g_width = 16;
  int gru_units = 4;

  int hidden_size() const { return 2 * gru_units; }
  void validate() const;
};

/// Standardization constants estimated on the training residuals.
/// g sees (x - x_mean) / x_sd and returns r_mean + r_sd * net(.); s sees
/// r / r_sd; b returns r_sd * (w . l + bias).
struct NormStats {
  double x_mean = 0.0;
  double x_sd = 1.0;
  double r_mean = 0.0;
  double r_sd = 1.0;
};

/// Offsets of every named parameter block inside the flat vector.
struct RnnLayout {
  struct Block {
    std::string name;
    std::vector<std::size_t> shape;
    std::size_t offset = 0;
    std::size_t size = 0;
  };

  explicit RnnLayout(const RnnArch& arch);

  std::vector<Block> blocks;
  std::size_t g_w1, g_b1, g_w2, g_b2, g_w3, g_b3;
  std::size_t s1_w, s1_u, s1_b, s2_w, s2_u, s2_b;
  std::size_t b_w, b_b;
  std::size_t log_sigma;
  std::size_t total = 0;

  const Block& block(const std::string& name) const;
};

/// Parameters of the recurrent stochastic model. Noise scale is stored as
/// log(sigma) so optimization keeps it positive.
class RnnModel {
 public:
  RnnModel() : RnnModel(RnnArch{}) {}
  explicit RnnModel(const RnnArch& arch, const NormStats& norm = {}, double dt = 0.005,
                    double F_default = 20.0);

  const RnnArch& arch() const { return arch_; }
  const RnnLayout& layout() const { return layout_; }
  const NormStats& norm() const { return norm_; }
  void set_norm(const NormStats& n) { norm_ = n; }
  double dt() const { return dt_; }
  double F_default() const { return F_default_; }

  std::span<const double> params() const { return params_; }
  std::span<double> params() { return params_; }
  std::span<const double> block(const std::string& name) const;
  std::span<double> block(const std::string& name);

  double sigma() const;
  void set_sigma(double sigma);

  GruView gru1() const;
  GruView gru2() const;

  /// Glorot-uniform weights, zero biases, sigma = norm().r_sd.
  void init_glorot(std::uint64_t seed);

  nlohmann::json provenance = nlohmann::json::object();

 private:
  RnnArch arch_;
  RnnLayout layout_;
  NormStats norm_;
  double dt_;
  double F_default_;
  std::vector<double> params_;
};

/// Per-gridpoint recurrent state: l is K x hidden_size (row per k, layer-1
/// state first), r is the last residual per k.
struct HiddenState {
  int K = 0;
  int hidden = 0;
  std::vector<double> l;
  std::vector<double> r;

  static HiddenState zeros(int K, int hidden);
  std::span<double> l_of(int k) {
    return {l.data() + static_cast<std::size_t>(k) * static_cast<std::size_t>(hidden),
            static_cast<std::size_t>(hidden)};
  }
  std::span<const double> l_of(int k) const {
    return {l.data() + static_cast<std::size_t>(k) * static_cast<std::size_t>(hidden),
            static_cast<std::size_t>(hidden)};
  }
};

/// l <- s(l, r): layer 1 consumes r / r_sd with state l[0:H], layer 2
/// consumes layer 1's new state with state l[H:2H]. Updates `l` in place.
void rnn_hidden_update(const RnnModel& m, std::span<double> l, double r);

/// b(l): mean of the next residual.
double rnn_residual_mean(const RnnModel& m, std::span<const double> l);

/// g(x): deterministic sub-grid tendency.
double rnn_subgrid_g(const RnnModel& m, double x);

/// One step for all gridpoints with explicit noise z (length K):
///   l_k <- s(l_k, r_k); r_k <- b(l_k) + sigma z_k;
///   x_k <- x_k + omega_k(x) - dt (g(x_k) + r_k).
/// Returns false if the new x leaves the bounded region.
bool rnn_step(const RnnModel& m, std::span<double> x, HiddenState& hs, double F,
              std::span<const double> z);

/// Same, drawing z_k from streams[k].
bool rnn_step(const RnnModel& m, std::span<double> x, HiddenState& hs, double F,
              std::span<RngStream> streams);

/// Warm-starts the hidden state from observed states. Uses rows
/// [end_row - spinup - 1, end_row) of `history`: residuals
/// r_{t+1} = (x_t + omega(x_t) - x_{t+1}) / dt - g(x_t) are threaded through
/// rnn_hidden_update starting from zero. Returns (l, last r). Throws
/// ConfigError if the history is too short.
HiddenState warm_start(const RnnModel& m, const Trajectory& history, std::size_t end_row, double F,
                       std::size_t spinup = 100);

}  // namespace l96sp
