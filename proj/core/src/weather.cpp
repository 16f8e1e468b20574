#include "l96sp/weather.hpp"

#include <algorithm>
#include <cmath>

#include "l96sp/error.hpp"
#include "l96sp/rng.hpp"

namespace l96sp {

void EnsembleSpec::validate() const {
  if (n_init < 1) throw ConfigError("EnsembleSpec: n_init must be >= 1");
  if (n_members < 2) throw ConfigError("EnsembleSpec: n_members must be >= 2");
  if (!(horizon > 0.0)) throw ConfigError("EnsembleSpec: horizon must be positive");
  if (!(min_separation >= 0.0)) throw ConfigError("EnsembleSpec: min_separation must be >= 0");
}

EnsembleForecast EnsembleForecast::zeros(std::size_t M, std::size_t N, std::size_t L, std::size_t K) {
  EnsembleForecast f;
  f.M = M;
  f.N = N;
  f.L = L;
  f.K = K;
  f.obs.assign(M * L * K, 0.0);
  f.members.assign(M * N * L * K, 0.0);
  return f;
}

namespace {

double ensemble_mean(const EnsembleForecast& f, std::size_t m, std::size_t l, std::size_t k) {
  double s = 0.0;
  for (std::size_t n = 0; n < f.N; ++n) s += f.at(m, n, l, k);
  return s / static_cast<double>(f.N);
}

}  // namespace

std::vector<double> weather_error(const EnsembleForecast& f) {
  if (f.obs.size() != f.M * f.L * f.K || f.members.size() != f.M * f.N * f.L * f.K || f.N == 0)
    throw ConfigError("weather_error: mismatched shapes");
  std::vector<double> out(f.L, 0.0);
  for (std::size_t l = 0; l < f.L; ++l) {
    double acc = 0.0;
    for (std::size_t m = 0; m < f.M; ++m)
      for (std::size_t k = 0; k < f.K; ++k) {
        const double d = f.obs_at(m, l, k) - ensemble_mean(f, m, l, k);
        acc += d * d;
      }
    out[l] = std::sqrt(acc / static_cast<double>(f.M * f.K));
  }
  return out;
}

std::vector<double> weather_spread(const EnsembleForecast& f) {
  if (f.members.size() != f.M * f.N * f.L * f.K || f.N < 2)
    throw ConfigError("weather_spread: need N >= 2 and consistent shapes");
  std::vector<double> out(f.L, 0.0);
  for (std::size_t l = 0; l < f.L; ++l) {
    double acc = 0.0;
    for (std::size_t m = 0; m < f.M; ++m)
      for (std::size_t k = 0; k < f.K; ++k) {
        const double mean = ensemble_mean(f, m, l, k);
        double var = 0.0;
        for (std::size_t n = 0; n < f.N; ++n) {
          const double d = f.at(m, n, l, k) - mean;
          var += d * d;
        }
        acc += var / static_cast<double>(f.N);
      }
    out[l] = std::sqrt(acc / static_cast<double>(f.M * f.K));
  }
  return out;
}

std::vector<std::size_t> sample_initial_conditions(std::size_t rows, double dt_save,
                                                   std::size_t horizon_steps,
                                                   const EnsembleSpec& spec) {
  spec.validate();
  if (rows < spec.spinup + horizon_steps + 2)
    throw ConfigError("weather eval: truth too short for spin-up plus horizon");
  const std::size_t lo = std::max<std::size_t>(spec.spinup, 1);
  const std::size_t hi = rows - 1 - horizon_steps;  // inclusive
  std::vector<std::size_t> candidates;
  for (std::size_t r = lo; r <= hi; ++r) candidates.push_back(r);
  RngStream rng(spec.seed, 0x1c0000ULL);
  std::shuffle(candidates.begin(), candidates.end(), rng);

  const auto sep = static_cast<std::size_t>(std::ceil(spec.min_separation / dt_save - 1e-9));
  std::vector<std::size_t> chosen;
  for (std::size_t r : candidates) {
    const bool ok = std::all_of(chosen.begin(), chosen.end(), [&](std::size_t c) {
      return (r > c ? r - c : c - r) >= sep;
    });
    if (ok) chosen.push_back(r);
    if (chosen.size() == spec.n_init) break;
  }
  if (chosen.size() < spec.n_init)
    throw ConfigError("weather eval: insufficient truth length for the requested initial conditions");
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

namespace {

WeatherCurves finish_curves(const EnsembleForecast& f, double dt_save) {
  WeatherCurves c;
  c.error = weather_error(f);
  c.spread = weather_spread(f);
  for (std::size_t l = 0; l < f.L; ++l) c.lead.push_back(static_cast<double>(l) * dt_save);
  return c;
}

}  // namespace

WeatherCurves run_weather_eval(const Model& model, const Trajectory& truth,
                               const EnsembleSpec& spec) {
  spec.validate();
  const double dt = model_dt(model);
  if (std::abs(truth.dt_save - dt) > 1e-12 * dt)
    throw ConfigError("weather eval: truth dt_save differs from the model time step");
  const auto horizon_steps = static_cast<std::size_t>(std::llround(spec.horizon / dt));
  const auto inits = sample_initial_conditions(truth.rows(), dt, horizon_steps, spec);
  const auto K = static_cast<std::size_t>(truth.K);
  const std::size_t L = horizon_steps + 1;
  auto f = EnsembleForecast::zeros(inits.size(), spec.n_members, L, K);

  for (std::size_t m = 0; m < inits.size(); ++m) {
    const std::size_t row = inits[m];
    for (std::size_t l = 0; l < L; ++l)
      for (std::size_t k = 0; k < K; ++k) f.obs_at(m, l, k) = truth.row(row + l)[k];
    const ModelState warm = warm_state(model, truth, row + 1, truth.F, spec.spinup);
    for (std::size_t n = 0; n < spec.n_members; ++n) {
      ModelState state = warm;
      std::vector<double> x(truth.row(row).begin(), truth.row(row).end());
      auto streams = member_streams(spec.seed, m * spec.n_members + n, truth.K);
      for (std::size_t l = 0; l < L; ++l) {
        if (l > 0 && !step_model(model, x, state, truth.F, streams)) {
          // A blown-up member keeps its last bounded value for the rest of
          // the horizon.
          for (std::size_t ll = l; ll < L; ++ll)
            for (std::size_t k = 0; k < K; ++k) f.at(m, n, ll, k) = f.at(m, n, l - 1, k);
          break;
        }
        for (std::size_t k = 0; k < K; ++k) f.at(m, n, l, k) = x[k];
      }
    }
  }
  auto curves = finish_curves(f, dt);
  curves.init_rows = inits;
  return curves;
}

WeatherCurves run_perfect_model_eval(const L96Config& cfg, const EnsembleSpec& spec,
                                     double perturbation, double dt_inner, double dt_save,
                                     double burn_in) {
  spec.validate();
  const long long save_every = integer_ratio(dt_save, dt_inner);
  if (save_every < 1) throw ConfigError("perfect-model eval: dt_save must be a multiple of dt_inner");
  const auto horizon_steps = static_cast<std::size_t>(std::llround(spec.horizon / dt_save));
  const std::size_t L = horizon_steps + 1;
  const auto K = static_cast<std::size_t>(cfg.K);
  const auto sep_steps =
      std::max<long long>(1, std::llround(std::max(spec.min_separation, dt_save) / dt_inner));

  // Initial conditions: attractor states min_separation apart along one
  // truth run.
  TruthState state = random_initial_state(cfg, spec.seed);
  Rk4Integrator integ(cfg);
  for (long long i = 0; i < std::llround(burn_in / dt_inner); ++i)
    if (!integ.step(state, dt_inner)) throw BlowUpError(static_cast<double>(i) * dt_inner, "perfect-model burn-in blew up");

  auto f = EnsembleForecast::zeros(spec.n_init, spec.n_members, L, K);
  TruthState run;
  for (std::size_t m = 0; m < spec.n_init; ++m) {
    for (long long i = 0; i < sep_steps; ++i)
      if (!integ.step(state, dt_inner)) throw BlowUpError(0.0, "perfect-model spacing run blew up");
    for (std::size_t n = 0; n <= spec.n_members; ++n) {
      run = state;
      RngStream rng(spec.seed, 0x9e0000ULL + m * (spec.n_members + 1) + n);
      for (auto& x : run.X) x += perturbation * rng.gaussian();
      for (std::size_t l = 0; l < L; ++l) {
        if (l > 0)
          for (long long s = 0; s < save_every; ++s)
            if (!integ.step(run, dt_inner))
              throw BlowUpError(static_cast<double>(l) * dt_save, "perfect-model member blew up");
        for (std::size_t k = 0; k < K; ++k) {
          if (n == 0)
            f.obs_at(m, l, k) = run.X[k];
          else
            f.at(m, n - 1, l, k) = run.X[k];
        }
      }
    }
  }
  return finish_curves(f, dt_save);
}

}  // namespace l96sp
