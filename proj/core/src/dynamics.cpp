#include "l96sp/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "l96sp/error.hpp"
#include "l96sp/rng.hpp"

namespace l96sp {

void L96Config::validate() const {
  if (K < 4) throw ConfigError("L96Config: K must be >= 4");
  if (J < 1) throw ConfigError("L96Config: J must be >= 1");
  if (b == 0.0) throw ConfigError("L96Config: b must be non-zero");
  if (!std::isfinite(h) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(F))
    throw ConfigError("L96Config: constants must be finite");
}

Trajectory Trajectory::slice(std::size_t begin, std::size_t count) const {
  if (begin + count > rows()) throw ConfigError("Trajectory::slice out of range");
  Trajectory out;
  out.K = K;
  out.F = F;
  out.dt_save = dt_save;
  out.seed = seed;
  out.t0 = t0 + static_cast<double>(begin) * dt_save;
  const auto k = static_cast<std::size_t>(K);
  out.data.assign(data.begin() + static_cast<std::ptrdiff_t>(begin * k),
                  data.begin() + static_cast<std::ptrdiff_t>((begin + count) * k));
  return out;
}

void Trajectory::validate() const {
  if (K < 1) throw ConfigError("Trajectory: K must be positive");
  if (data.empty() || data.size() % static_cast<std::size_t>(K) != 0)
    throw ConfigError("Trajectory: data size is not a positive multiple of K");
  if (!(dt_save > 0.0)) throw ConfigError("Trajectory: dt_save must be positive");
  for (double v : data)
    if (!std::isfinite(v)) throw ConfigError("Trajectory: non-finite value");
}

bool within_bounds(std::span<const double> v) {
  for (double x : v)
    if (!(std::abs(x) <= kBlowUpThreshold)) return false;  // also catches NaN
  return true;
}

namespace {

template <bool Advection>
void tendency_kernel(const double* __restrict X, const double* __restrict Y, double* __restrict dX,
                     double* __restrict dY, const L96Config& cfg) {
  const int K = cfg.K;
  const int J = cfg.J;
  const int N = J * K;
  const double hcb = cfg.h * cfg.c / cfg.b;
  const double cb = cfg.c * cfg.b;
  const double c = cfg.c;
  const double F = cfg.F;

  for (int k = 0; k < K; ++k) {
    const int km2 = (k + K - 2) % K;
    const int km1 = (k + K - 1) % K;
    const int kp1 = (k + 1) % K;
    double sum = 0.0;
    const double* yk = Y + static_cast<std::ptrdiff_t>(k) * J;
    for (int j = 0; j < J; ++j) sum += yk[j];
    const double advection = Advection ? -X[km1] * (X[km2] - X[kp1]) : 0.0;
    dX[k] = advection - X[k] + F - hcb * sum;
  }

  auto fast = [=](int j, int jm1, int jp1, int jp2, double coupling) {
    const double advection = Advection ? -cb * Y[jp1] * (Y[jp2] - Y[jm1]) : 0.0;
    dY[j] = advection - c * Y[j] + coupling;
  };
  if (N < 4) {
    for (int j = 0; j < N; ++j) fast(j, (j + N - 1) % N, (j + 1) % N, (j + 2) % N, hcb * X[j / J]);
    return;
  }
  // Interior indices in one sweep, then the coupling added per sector; the
  // three wrap-around indices last.
  for (int j = 1; j < N - 2; ++j) {
    const double advection = Advection ? -cb * Y[j + 1] * (Y[j + 2] - Y[j - 1]) : 0.0;
    dY[j] = advection - c * Y[j];
  }
  for (int k = 0; k < K; ++k) {
    const double coupling = hcb * X[k];
    const int lo = std::max(k * J, 1);
    const int hi = std::min((k + 1) * J, N - 2);
    for (int j = lo; j < hi; ++j) dY[j] += coupling;
  }
  fast(0, N - 1, 1, 2, hcb * X[0]);
  fast(N - 2, N - 3, N - 1, 0, hcb * X[(N - 2) / J]);
  fast(N - 1, N - 2, 0, 1, hcb * X[K - 1]);
}

}  // namespace

void truth_tendency(const TruthState& s, const L96Config& cfg, TruthState& out) {
  out.X.resize(static_cast<std::size_t>(cfg.K));
  out.Y.resize(static_cast<std::size_t>(cfg.K) * static_cast<std::size_t>(cfg.J));
  if (cfg.advection)
    tendency_kernel<true>(s.X.data(), s.Y.data(), out.X.data(), out.Y.data(), cfg);
  else
    tendency_kernel<false>(s.X.data(), s.Y.data(), out.X.data(), out.Y.data(), cfg);
}

TruthState truth_tendency(const TruthState& s, const L96Config& cfg) {
  TruthState out;
  truth_tendency(s, cfg, out);
  return out;
}

Rk4Integrator::Rk4Integrator(const L96Config& cfg) : cfg_(cfg) { cfg_.validate(); }

namespace {

void axpy_into(const std::vector<double>& base, double a, const std::vector<double>& dir,
               std::vector<double>& out) {
  out.resize(base.size());
  const double* __restrict x = base.data();
  const double* __restrict d = dir.data();
  double* __restrict o = out.data();
  const std::size_t n = base.size();
  for (std::size_t i = 0; i < n; ++i) o[i] = x[i] + a * d[i];
}

// Combines the stages and reports whether every entry stays bounded.
bool rk4_combine(std::vector<double>& s, double dt, const std::vector<double>& k1,
                 const std::vector<double>& k2, const std::vector<double>& k3,
                 const std::vector<double>& k4) {
  const double w = dt / 6.0;
  double* __restrict v = s.data();
  const double* __restrict a = k1.data();
  const double* __restrict b = k2.data();
  const double* __restrict c = k3.data();
  const double* __restrict d = k4.data();
  const std::size_t n = s.size();
  int bad = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = v[i] + w * (a[i] + 2.0 * b[i] + 2.0 * c[i] + d[i]);
    v[i] = x;
    bad |= static_cast<int>(!(std::abs(x) <= kBlowUpThreshold));
  }
  return bad == 0;
}

}  // namespace

bool Rk4Integrator::step(TruthState& s, double dt) {
  if (dt == 0.0) return within_bounds(s.X) && within_bounds(s.Y);
  const double half = 0.5 * dt;
  truth_tendency(s, cfg_, k1_);
  axpy_into(s.X, half, k1_.X, tmp_.X);
  axpy_into(s.Y, half, k1_.Y, tmp_.Y);
  truth_tendency(tmp_, cfg_, k2_);
  axpy_into(s.X, half, k2_.X, tmp_.X);
  axpy_into(s.Y, half, k2_.Y, tmp_.Y);
  truth_tendency(tmp_, cfg_, k3_);
  axpy_into(s.X, dt, k3_.X, tmp_.X);
  axpy_into(s.Y, dt, k3_.Y, tmp_.Y);
  truth_tendency(tmp_, cfg_, k4_);
  const bool x_ok = rk4_combine(s.X, dt, k1_.X, k2_.X, k3_.X, k4_.X);
  const bool y_ok = rk4_combine(s.Y, dt, k1_.Y, k2_.Y, k3_.Y, k4_.Y);
  return x_ok && y_ok;
}

TruthState rk4_step(const TruthState& s, const L96Config& cfg, double dt) {
  if (dt < 0.0) throw ConfigError("rk4_step: dt must be non-negative");
  Rk4Integrator integ(cfg);
  TruthState out = s;
  if (!integ.step(out, dt)) throw BlowUpError(dt, "rk4_step: state left the bounded region");
  return out;
}

TruthState random_initial_state(const L96Config& cfg, std::uint64_t seed) {
  cfg.validate();
  RngStream rng(seed, 0);
  TruthState s;
  s.X.resize(static_cast<std::size_t>(cfg.K));
  for (auto& x : s.X) x = -5.0 + 10.0 * rng.uniform();
  s.Y.assign(static_cast<std::size_t>(cfg.K) * static_cast<std::size_t>(cfg.J), 0.0);
  return s;
}

long long integer_ratio(double span, double step) {
  if (!(step > 0.0) || !(span >= 0.0)) return -1;
  const double q = span / step;
  const double r = std::round(q);
  if (std::abs(q - r) > 1e-9 * std::max(1.0, q)) return -1;
  return static_cast<long long>(r);
}

Trajectory generate_truth(const L96Config& cfg, const TruthRunSpec& run, TruthState init,
                          std::uint64_t seed, TruthState* final_state) {
  cfg.validate();
  if (!(run.dt_inner > 0.0) || !(run.dt_save > 0.0))
    throw ConfigError("generate_truth: time steps must be positive");
  const long long save_every = integer_ratio(run.dt_save, run.dt_inner);
  if (save_every < 1)
    throw ConfigError("generate_truth: dt_save must be an integer multiple of dt_inner");
  if (run.duration < run.dt_save * (1.0 - 1e-12))
    throw ConfigError("generate_truth: duration must be >= dt_save");
  const long long burn_steps = std::llround(std::max(0.0, run.burn_in) / run.dt_inner);
  const auto rows = static_cast<std::size_t>(std::llround(run.duration / run.dt_save));
  if (init.X.size() != static_cast<std::size_t>(cfg.K) ||
      init.Y.size() != static_cast<std::size_t>(cfg.K) * static_cast<std::size_t>(cfg.J))
    throw ConfigError("generate_truth: initial state has the wrong shape");

  Rk4Integrator integ(cfg);
  long long steps_done = 0;
  auto advance = [&](long long n) {
    for (long long i = 0; i < n; ++i) {
      if (!integ.step(init, run.dt_inner)) {
        const double t = static_cast<double>(steps_done + i + 1) * run.dt_inner;
        std::ostringstream msg;
        msg << "truth integration blew up at t=" << t << " MTU (F=" << cfg.F << ")";
        throw BlowUpError(t, msg.str());
      }
    }
    steps_done += n;
  };

  advance(burn_steps);
  Trajectory traj;
  traj.K = cfg.K;
  traj.F = cfg.F;
  traj.dt_save = run.dt_save;
  traj.seed = seed;
  traj.t0 = static_cast<double>(burn_steps) * run.dt_inner;
  traj.data.reserve(rows * static_cast<std::size_t>(cfg.K));
  traj.append(init.X);
  for (std::size_t r = 1; r < rows; ++r) {
    advance(save_every);
    traj.append(init.X);
  }
  if (final_state) *final_state = std::move(init);
  return traj;
}

void lambda_tendency(std::span<const double> x, double F, double dt, std::span<double> out) {
  const std::size_t K = x.size();
  for (std::size_t k = 0; k < K; ++k) {
    const std::size_t km2 = (k + K - 2) % K;
    const std::size_t km1 = (k + K - 1) % K;
    const std::size_t kp1 = (k + 1) % K;
    out[k] = dt * (-x[km1] * (x[km2] - x[kp1]) - x[k] + F);
  }
}

std::vector<double> lambda_tendency(std::span<const double> x, double F, double dt) {
  std::vector<double> out(x.size());
  lambda_tendency(x, F, dt, out);
  return out;
}

void rk2_omega(std::span<const double> x, double F, double dt, std::span<double> out,
               std::span<double> scratch) {
  const std::size_t K = x.size();
  std::span<double> lam = scratch.subspan(0, K);
  std::span<double> mid = scratch.subspan(K, K);
  lambda_tendency(x, F, dt, lam);
  for (std::size_t k = 0; k < K; ++k) mid[k] = x[k] + lam[k] / 2.0;
  lambda_tendency(mid, F, dt, out);
}

std::vector<double> rk2_omega(std::span<const double> x, double F, double dt) {
  std::vector<double> out(x.size());
  std::vector<double> scratch(2 * x.size());
  rk2_omega(x, F, dt, out, scratch);
  return out;
}

}  // namespace l96sp
