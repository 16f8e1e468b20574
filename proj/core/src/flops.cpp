#include "l96sp/flops.hpp"

#include "l96sp/error.hpp"

namespace l96sp {

long long omega_flops() {
  // lambda: (x[k-2] - x[k+1]), product, two subtractions, + F, * dt -> 6.
  // mid point x + lambda / 2 -> 2. Twice lambda plus the mid point.
  const long long lambda = 6;
  return 2 * lambda + 2;
}

FlopCount poly_flops(int K) {
  FlopCount f;
  const long long horner = 6;
  const long long noise = 3 + kGaussianDrawFlops;  // phi h + s z
  const long long update = 4;                      // x + omega - dt (P + h)
  const long long per_k = omega_flops() + horner + noise + update;
  f.breakdown = {{"omega", omega_flops()}, {"polynomial", horner}, {"ar1", noise}, {"update", update},
                 {"per_gridpoint", per_k}};
  f.total = per_k * K;
  return f;
}

long long gru_flops(int in, int units) {
  const long long H = units;
  const long long gates = 3 * H * (2 * in + 2 * H + 1);  // W x + U h + bias
  const long long reset_product = H;
  const long long sigmoids = 2 * H * (kTranscendentalFlops + 2);
  const long long tanhs = H * kTranscendentalFlops;
  const long long blend = 4 * H;  // (1 - z) h + z c
  return gates + reset_product + sigmoids + tanhs + blend;
}

FlopCount rnn_flops(int K, const RnnArch& arch) {
  arch.validate();
  const long long W = arch.g_width;
  const long long H = arch.gru_units;
  FlopCount f;
  const long long g = 2                                  // input standardization
                      + W * (2 + kTranscendentalFlops)   // layer 1
                      + W * (2 * W + 1 + kTranscendentalFlops)
                      + 2 * W + 1                        // output layer
                      + 2;                               // output scaling
  const long long s = 1 + gru_flops(1, arch.gru_units) + gru_flops(arch.gru_units, arch.gru_units);
  const long long b = 2 * (2 * H) + 1 + 1;
  const long long noise = 2 + kGaussianDrawFlops;
  const long long update = 4;
  const long long per_k = omega_flops() + g + s + b + noise + update;
  f.breakdown = {{"omega", omega_flops()}, {"g", g}, {"s", s}, {"b", b}, {"noise", noise},
                 {"update", update}, {"per_gridpoint", per_k}};
  f.total = per_k * K;
  return f;
}

FlopCount truth_flops(const L96Config& cfg, double dt, double dt_inner) {
  cfg.validate();
  const long long inner = integer_ratio(dt, dt_inner);
  if (inner < 1) throw ConfigError("truth_flops: dt must be a multiple of dt_inner");
  const long long K = cfg.K;
  const long long N = static_cast<long long>(cfg.K) * cfg.J;
  const long long x_tend = K * ((cfg.J - 1) + 1 + 5);  // sector sum, coupling, advection + forcing
  const long long y_tend = N * 7;
  const long long tendency = x_tend + y_tend;
  const long long stages = 3 * 2 * (K + N);  // s + a k for three intermediate states
  const long long combine = 7 * (K + N);
  const long long rk4 = 4 * tendency + stages + combine;
  FlopCount f;
  f.breakdown = {{"tendency", tendency}, {"rk4_step", rk4}, {"inner_steps", inner}};
  f.total = inner * rk4;
  return f;
}

nlohmann::json cost_report(const L96Config& cfg, const RnnArch& arch, double dt, double dt_inner) {
  const auto p = poly_flops(cfg.K);
  const auto r = rnn_flops(cfg.K, arch);
  const auto t = truth_flops(cfg, dt, dt_inner);
  return {{"convention",
           {{"add_sub_mul_div", 1},
            {"transcendental", kTranscendentalFlops},
            {"gaussian_draw", kGaussianDrawFlops},
            {"unit", "flops per model time step of dt for all K gridpoints"}}},
          {"dt", dt},
          {"polynomial", p.total},
          {"rnn", r.total},
          {"truth", t.total},
          {"breakdown", {{"polynomial", p.breakdown}, {"rnn", r.breakdown}, {"truth", t.breakdown}}},
          {"architecture", {{"g_width", arch.g_width}, {"gru_units", arch.gru_units}}}};
}

}  // namespace l96sp
