#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "l96sp/dynamics.hpp"
#include "l96sp/simulate.hpp"

namespace l96sp {

struct EnsembleSpec {
  std::size_t n_init = 100;     // M
  std::size_t n_members = 20;   // N
  double horizon = 3.5;         // MTU
  std::size_t spinup = 100;     // warm-start window, steps
  std::uint64_t seed = 0;
  double min_separation = 1.0;  // MTU between initial conditions

  void validate() const;
};

/// Observations (M x L x K) and member forecasts (M x N x L x K) on a
/// shared lead-time grid of L points (lead 0 = initial condition).
struct EnsembleForecast {
  std::size_t M = 0, N = 0, L = 0, K = 0;
  std::vector<double> obs;
  std::vector<double> members;

  static EnsembleForecast zeros(std::size_t M, std::size_t N, std::size_t L, std::size_t K);
  double& obs_at(std::size_t m, std::size_t l, std::size_t k) { return obs[(m * L + l) * K + k]; }
  double obs_at(std::size_t m, std::size_t l, std::size_t k) const { return obs[(m * L + l) * K + k]; }
  double& at(std::size_t m, std::size_t n, std::size_t l, std::size_t k) {
    return members[((m * N + n) * L + l) * K + k];
  }
  double at(std::size_t m, std::size_t n, std::size_t l, std::size_t k) const {
    return members[((m * N + n) * L + l) * K + k];
  }
};

/// RMSE of the ensemble mean against the observation, averaged over
/// initial conditions and gridpoints inside the root, per lead.
std::vector<double> weather_error(const EnsembleForecast& f);

/// Root of the mean (over M, k) of the member variance about the ensemble
/// mean (divisor N), per lead.
std::vector<double> weather_spread(const EnsembleForecast& f);

struct WeatherCurves {
  std::vector<double> lead;  // MTU
  std::vector<double> error;
  std::vector<double> spread;
  std::vector<std::size_t> init_rows;
};

/// Truth rows usable as initial conditions: at least `spinup` rows of
/// history before and `horizon_steps` rows after; sampled uniformly without
/// replacement keeping `min_separation` apart. Throws ConfigError if fewer
/// than M can be placed.
std::vector<std::size_t> sample_initial_conditions(std::size_t rows, double dt_save,
                                                   std::size_t horizon_steps,
                                                   const EnsembleSpec& spec);

/// Ensemble forecasts of `model` from truth states, hidden state warmed up
/// on the preceding truth window; member n of IC m uses
/// seed = spec.seed, member id m * N + n.
WeatherCurves run_weather_eval(const Model& model, const Trajectory& truth,
                               const EnsembleSpec& spec);

/// Perfect-model check with the two-tier truth: from each of M attractor
/// states, N + 1 runs start from independently perturbed X (Gaussian,
/// sd = perturbation); run 0 is the observation, runs 1..N the ensemble.
WeatherCurves run_perfect_model_eval(const L96Config& cfg, const EnsembleSpec& spec,
                                     double perturbation, double dt_inner = 0.001,
                                     double dt_save = 0.005, double burn_in = 10.0);

}  // namespace l96sp
