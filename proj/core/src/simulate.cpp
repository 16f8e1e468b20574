#include "l96sp/simulate.hpp"

#include "l96sp/error.hpp"

namespace l96sp {

namespace {
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;
}  // namespace

std::string model_kind(const Model& m) {
  return std::holds_alternative<PolyModel>(m) ? "polynomial" : "rnn";
}

double model_dt(const Model& m) {
  return std::visit(overloaded{[](const PolyModel& p) { return p.dt; },
                               [](const RnnModel& r) { return r.dt(); }},
                    m);
}

ModelState fresh_state(const Model& m, int K) {
  return std::visit(
      overloaded{[&](const PolyModel&) -> ModelState { return PolyState::fresh(K); },
                 [&](const RnnModel& r) -> ModelState {
                   return HiddenState::zeros(K, r.arch().hidden_size());
                 }},
      m);
}

ModelState warm_state(const Model& m, const Trajectory& history, std::size_t end_row, double F,
                      std::size_t spinup) {
  return std::visit(
      overloaded{[&](const PolyModel& p) -> ModelState {
                   return poly_warm_start(p, history, end_row, F);
                 },
                 [&](const RnnModel& r) -> ModelState {
                   return warm_start(r, history, end_row, F, spinup);
                 }},
      m);
}

bool step_model(const Model& m, std::span<double> x, ModelState& state, double F,
                std::span<RngStream> streams) {
  if (const auto* p = std::get_if<PolyModel>(&m))
    return poly_step(*p, x, std::get<PolyState>(state), F, streams);
  return rnn_step(std::get<RnnModel>(m), x, std::get<HiddenState>(state), F, streams);
}

std::vector<RngStream> member_streams(std::uint64_t seed, std::uint64_t member, int K) {
  std::vector<RngStream> streams;
  streams.reserve(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k)
    streams.emplace_back(seed, member * static_cast<std::uint64_t>(K) + static_cast<std::uint64_t>(k));
  return streams;
}

SimulationResult simulate(const Model& m, std::vector<double> x0, ModelState state,
                          const SimulationSpec& spec) {
  if (spec.save_every == 0) throw ConfigError("simulate: save_every must be >= 1");
  const int K = static_cast<int>(x0.size());
  if (K < 4) throw ConfigError("simulate: need at least 4 gridpoints");
  const double dt = model_dt(m);

  SimulationResult res;
  res.traj.K = K;
  res.traj.F = spec.F;
  res.traj.dt_save = dt * static_cast<double>(spec.save_every);
  res.traj.seed = spec.seed;
  res.traj.data.reserve((spec.steps / spec.save_every + 1) * x0.size());
  res.traj.append(x0);

  auto streams = member_streams(spec.seed, spec.member, K);
  std::vector<double> x = std::move(x0);
  for (std::size_t n = 1; n <= spec.steps; ++n) {
    if (!step_model(m, x, state, spec.F, streams)) {
      res.blew_up = true;
      res.blowup_time = static_cast<double>(n) * dt;
      return res;
    }
    res.steps_completed = n;
    if (n % spec.save_every == 0) res.traj.append(x);
  }
  return res;
}

}  // namespace l96sp
