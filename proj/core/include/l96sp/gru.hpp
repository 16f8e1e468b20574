#pragma once

#include <cmath>
#include <span>

namespace l96sp {

inline constexpr int kMaxGruUnits = 16;

/// Read-only view of one GRU layer's parameters. Gate blocks are stacked
/// [update; reset; candidate]: `w` is (3*units x in), `u` is (3*units x
/// units), both row-major, `b` has 3*units entries.
///
///   z  = sigmoid(Wz in + Uz h + bz)
///   r  = sigmoid(Wr in + Ur h + br)
///   c  = tanh(Wc in + Uc (r * h) + bc)
///   h' = (1 - z) * h + z * c
struct GruView {
  int in = 0;
  int units = 0;
  const double* w = nullptr;
  const double* u = nullptr;
  const double* b = nullptr;
};

/// Gate activations saved by the forward pass for backpropagation.
struct GruCache {
  double z[kMaxGruUnits];
  double r[kMaxGruUnits];
  double c[kMaxGruUnits];
  double rh[kMaxGruUnits];
};

/// Gradient accumulators with the same layout as GruView.
struct GruGrad {
  double* w = nullptr;
  double* u = nullptr;
  double* b = nullptr;
};

/// Writes the new state to `out` (may not alias `state`).
void gru_cell(const GruView& g, std::span<const double> input, std::span<const double> state,
              std::span<double> out, GruCache* cache = nullptr);

/// Reverse-mode pass of gru_cell. Accumulates (+=) into `d_input`,
/// `d_state` and `grad`.
void gru_backward(const GruView& g, const GruCache& cache, std::span<const double> input,
                  std::span<const double> state, std::span<const double> d_out,
                  std::span<double> d_input, std::span<double> d_state, const GruGrad& grad);

inline double sigmoid(double a) { return 1.0 / (1.0 + std::exp(-a)); }

}  // namespace l96sp
