#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "l96sp/poly_model.hpp"
#include "l96sp/rnn_model.hpp"

namespace l96sp {

using Model = std::variant<PolyModel, RnnModel>;
using ModelState = std::variant<PolyState, HiddenState>;

/// "polynomial" or "rnn".
std::string model_kind(const Model& m);
double model_dt(const Model& m);

/// Free-running start: AR1 unprimed / zero recurrent state.
ModelState fresh_state(const Model& m, int K);

/// Hidden state warmed up on `history` rows ending (exclusive) at end_row.
ModelState warm_state(const Model& m, const Trajectory& history, std::size_t end_row, double F,
                      std::size_t spinup);

bool step_model(const Model& m, std::span<double> x, ModelState& state, double F,
                std::span<RngStream> streams);

/// Streams for one ensemble member: stream_id = member * K + k.
std::vector<RngStream> member_streams(std::uint64_t seed, std::uint64_t member, int K);

struct SimulationSpec {
  double F = 20.0;
  std::size_t steps = 0;
  std::uint64_t seed = 0;
  std::uint64_t member = 0;
  std::size_t save_every = 1;
};

struct SimulationResult {
  Trajectory traj;  // row 0 is x0
  bool blew_up = false;
  double blowup_time = std::numeric_limits<double>::quiet_NaN();
  std::size_t steps_completed = 0;
};

/// Runs `spec.steps` model steps. Stops at the first out-of-bounds state and
/// records its time (MTU since x0); the trajectory then ends at the last
/// valid saved state.
SimulationResult simulate(const Model& m, std::vector<double> x0, ModelState state,
                          const SimulationSpec& spec);

}  // namespace l96sp
