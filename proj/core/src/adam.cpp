#include "l96sp/adam.hpp"

#include <cmath>

#include "l96sp/error.hpp"

namespace l96sp {

void adam_update(std::span<double> params, std::span<const double> grads, AdamState& state,
                 double rate, const AdamHyper& hyper) {
  if (grads.size() != params.size() || state.m.size() != params.size() ||
      state.v.size() != params.size())
    throw ConfigError("adam_update: shape mismatch");
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(hyper.beta1, t);
  const double c2 = 1.0 - std::pow(hyper.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    state.m[i] = hyper.beta1 * state.m[i] + (1.0 - hyper.beta1) * grads[i];
    state.v[i] = hyper.beta2 * state.v[i] + (1.0 - hyper.beta2) * grads[i] * grads[i];
    const double m_hat = state.m[i] / c1;
    const double v_hat = state.v[i] / c2;
    params[i] -= rate * m_hat / (std::sqrt(v_hat) + hyper.eps);
  }
}

}  // namespace l96sp
