#include <benchmark/benchmark.h>

#include <vector>

#include "l96sp/dynamics.hpp"
#include "l96sp/poly_model.hpp"
#include "l96sp/residuals.hpp"
#include "l96sp/rnn_grad.hpp"
#include "l96sp/rnn_model.hpp"
#include "l96sp/rng.hpp"
#include "l96sp/trainer.hpp"

namespace {

using namespace l96sp;

std::vector<double> start_x() {
  std::vector<double> x(8);
  RngStream rng(1, 0);
  for (auto& v : x) v = -5.0 + 10.0 * rng.uniform();
  return x;
}

std::vector<RngStream> streams(int K) {
  std::vector<RngStream> s;
  for (int k = 0; k < K; ++k) s.emplace_back(2, static_cast<std::uint64_t>(k));
  return s;
}

void BM_TruthRk4Step(benchmark::State& state) {
  L96Config cfg;
  Rk4Integrator integ(cfg);
  TruthState s = random_initial_state(cfg, 3);
  for (int i = 0; i < 2000; ++i) integ.step(s, 0.001);
  for (auto _ : state) {
    integ.step(s, 0.001);
    benchmark::DoNotOptimize(s.X.data());
  }
}
BENCHMARK(BM_TruthRk4Step);

void BM_PolyStep(benchmark::State& state) {
  const PolyModel m{-0.002, -0.01, 1.2, 0.3, {0.98, 1.5}, 20.0, 0.005};
  auto x = start_x();
  auto st = PolyState::fresh(8);
  auto rng = streams(8);
  for (auto _ : state) {
    if (!poly_step(m, x, st, 20.0, rng)) x = start_x();
    benchmark::DoNotOptimize(x.data());
  }
}
BENCHMARK(BM_PolyStep);

void BM_RnnStep(benchmark::State& state) {
  RnnModel m(RnnArch{static_cast<int>(state.range(0)), static_cast<int>(state.range(1))},
             {2.5, 5.0, 0.5, 2.0});
  m.init_glorot(4);
  auto x = start_x();
  auto hs = HiddenState::zeros(8, m.arch().hidden_size());
  auto rng = streams(8);
  for (auto _ : state) {
    if (!rnn_step(m, x, hs, 20.0, rng)) x = start_x();
    benchmark::DoNotOptimize(x.data());
  }
}
BENCHMARK(BM_RnnStep)->Args({16, 4})->Args({32, 8});

void BM_RnnGradWindow(benchmark::State& state) {
  L96Config cfg;
  TruthRunSpec run;
  run.duration = 2.0;
  run.burn_in = 2.0;
  const auto ds = extract_residuals(generate_truth(cfg, run, random_initial_state(cfg, 5), 5));
  RnnModel m(RnnArch{}, estimate_norm_stats(ds));
  m.init_glorot(6);
  const auto windows = make_windows(ds, static_cast<std::size_t>(state.range(0)));
  const std::vector<Window> one{windows.front()};
  for (auto _ : state) benchmark::DoNotOptimize(rnn_grad(m, ds, one).loss);
  state.SetItemsProcessed(state.iterations() * state.range(0) * 8);
}
BENCHMARK(BM_RnnGradWindow)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
