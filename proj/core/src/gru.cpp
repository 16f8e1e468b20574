#include "l96sp/gru.hpp"

#include <cmath>

namespace l96sp {

void gru_cell(const GruView& g, std::span<const double> input, std::span<const double> state,
              std::span<double> out, GruCache* cache) {
  const int H = g.units;
  const int I = g.in;
  GruCache local;
  GruCache& c = cache ? *cache : local;

  for (int i = 0; i < H; ++i) {
    const double* wz = g.w + static_cast<std::ptrdiff_t>(i) * I;
    const double* wr = g.w + static_cast<std::ptrdiff_t>(H + i) * I;
    const double* uz = g.u + static_cast<std::ptrdiff_t>(i) * H;
    const double* ur = g.u + static_cast<std::ptrdiff_t>(H + i) * H;
    double az = 0.0;
    double ar = 0.0;
    for (int j = 0; j < I; ++j) {
      az += wz[j] * input[j];
      ar += wr[j] * input[j];
    }
    for (int j = 0; j < H; ++j) {
      az += uz[j] * state[j];
      ar += ur[j] * state[j];
    }
    c.z[i] = sigmoid(az + g.b[i]);
    c.r[i] = sigmoid(ar + g.b[H + i]);
  }
  for (int j = 0; j < H; ++j) c.rh[j] = c.r[j] * state[j];
  for (int i = 0; i < H; ++i) {
    const double* wc = g.w + static_cast<std::ptrdiff_t>(2 * H + i) * I;
    const double* uc = g.u + static_cast<std::ptrdiff_t>(2 * H + i) * H;
    double ac = 0.0;
    for (int j = 0; j < I; ++j) ac += wc[j] * input[j];
    for (int j = 0; j < H; ++j) ac += uc[j] * c.rh[j];
    c.c[i] = std::tanh(ac + g.b[2 * H + i]);
    out[i] = (1.0 - c.z[i]) * state[i] + c.z[i] * c.c[i];
  }
}

void gru_backward(const GruView& g, const GruCache& c, std::span<const double> input,
                  std::span<const double> state, std::span<const double> d_out,
                  std::span<double> d_input, std::span<double> d_state, const GruGrad& grad) {
  const int H = g.units;
  const int I = g.in;
  double da_z[kMaxGruUnits];
  double da_r[kMaxGruUnits];
  double da_c[kMaxGruUnits];
  double d_rh[kMaxGruUnits] = {};

  for (int i = 0; i < H; ++i) {
    const double dz = d_out[i] * (c.c[i] - state[i]);
    const double dc = d_out[i] * c.z[i];
    d_state[i] += d_out[i] * (1.0 - c.z[i]);
    da_c[i] = dc * (1.0 - c.c[i] * c.c[i]);
    da_z[i] = dz * c.z[i] * (1.0 - c.z[i]);
  }
  // Candidate block.
  for (int i = 0; i < H; ++i) {
    const std::ptrdiff_t row = 2 * H + i;
    for (int j = 0; j < I; ++j) {
      grad.w[row * I + j] += da_c[i] * input[j];
      d_input[j] += g.w[row * I + j] * da_c[i];
    }
    for (int j = 0; j < H; ++j) {
      grad.u[row * H + j] += da_c[i] * c.rh[j];
      d_rh[j] += g.u[row * H + j] * da_c[i];
    }
    grad.b[row] += da_c[i];
  }
  for (int j = 0; j < H; ++j) {
    const double dr = d_rh[j] * state[j];
    d_state[j] += d_rh[j] * c.r[j];
    da_r[j] = dr * c.r[j] * (1.0 - c.r[j]);
  }
  // Update and reset blocks.
  for (int gate = 0; gate < 2; ++gate) {
    const double* da = gate == 0 ? da_z : da_r;
    for (int i = 0; i < H; ++i) {
      const std::ptrdiff_t row = gate * H + i;
      for (int j = 0; j < I; ++j) {
        grad.w[row * I + j] += da[i] * input[j];
        d_input[j] += g.w[row * I + j] * da[i];
      }
      for (int j = 0; j < H; ++j) {
        grad.u[row * H + j] += da[i] * state[j];
        d_state[j] += g.u[row * H + j] * da[i];
      }
      grad.b[row] += da[i];
    }
  }
}

}  // namespace l96sp
