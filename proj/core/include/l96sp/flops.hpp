#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "l96sp/dynamics.hpp"
#include "l96sp/rnn_model.hpp"

namespace l96sp {

/// Static operation counts per model time step of length dt for the full
/// K-vector. Convention: add/sub/mul/div = 1 flop, exp/tanh/sqrt/log/sin =
/// kTranscendentalFlops, one standard-normal draw = kGaussianDrawFlops.
inline constexpr long long kTranscendentalFlops = 10;
inline constexpr long long kGaussianDrawFlops = 2 * kTranscendentalFlops;

struct FlopCount {
  long long total = 0;
  nlohmann::json breakdown = nlohmann::json::object();  // per-gridpoint parts
};

/// omega(x) for one gridpoint.
long long omega_flops();

FlopCount poly_flops(int K);

/// One GRU cell with `in` inputs and `units` units.
long long gru_flops(int in, int units);

FlopCount rnn_flops(int K, const RnnArch& arch);

/// Two-tier truth: RK4 inner steps of dt_inner covering one step of dt.
FlopCount truth_flops(const L96Config& cfg, double dt = 0.005, double dt_inner = 0.001);

/// {"convention": ..., "polynomial": n, "rnn": n, "truth": n, "breakdown": ...}
nlohmann::json cost_report(const L96Config& cfg, const RnnArch& arch, double dt = 0.005,
                           double dt_inner = 0.001);

}  // namespace l96sp
