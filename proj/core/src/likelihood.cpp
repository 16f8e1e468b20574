#include "l96sp/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "l96sp/error.hpp"

namespace l96sp {

namespace {

void check_dt(const Trajectory& traj, double dt) {
  if (traj.rows() < 2) throw ConfigError("loglik: trajectory needs at least 2 rows");
  if (std::abs(traj.dt_save - dt) > 1e-12 * dt)
    throw ConfigError("loglik: trajectory dt_save differs from the model time step");
}

LogLikelihood finish(double sum, std::size_t K, std::size_t n, double dt) {
  LogLikelihood ll;
  ll.K = K;
  ll.n = n;
  ll.total = sum - static_cast<double>(K * n) * std::log(dt);
  ll.normalized = ll.total / static_cast<double>(K * n);
  return ll;
}

}  // namespace

double normal_logpdf(double x, double mean, double sd) {
  const double e = (x - mean) / sd;
  return -0.5 * e * e - std::log(sd) - 0.5 * std::log(2.0 * std::numbers::pi);
}

LogLikelihood loglik_poly(const Trajectory& traj, const PolyModel& m, std::vector<double>* per_step) {
  check_dt(traj, m.dt);
  const std::size_t K = static_cast<std::size_t>(traj.K);
  const std::size_t n = traj.rows() - 1;
  const double sigma = m.ar1.sigma;
  const double cond_sd = sigma * std::sqrt(1.0 - m.ar1.phi * m.ar1.phi);
  const double log_dt_k = static_cast<double>(K) * std::log(m.dt);
  if (per_step) per_step->assign(n, 0.0);

  std::vector<double> h_prev(K, 0.0);
  std::vector<double> omega(K);
  std::vector<double> scratch(2 * K);
  double sum = 0.0;
  bool any_nonzero = false;
  for (std::size_t t = 0; t < n; ++t) {
    const auto xt = traj.row(t);
    const auto xn = traj.row(t + 1);
    rk2_omega(xt, traj.F, m.dt, omega, scratch);
    double step = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      const double h = (xt[k] + omega[k] - xn[k]) / m.dt - m.tendency(xt[k]);
      if (sigma > 0.0) {
        step += t == 0 ? normal_logpdf(h, 0.0, sigma)
                       : normal_logpdf(h, m.ar1.phi * h_prev[k], cond_sd);
      } else if (h != 0.0) {
        any_nonzero = true;
      }
      h_prev[k] = h;
    }
    sum += step;
    if (per_step) (*per_step)[t] = step - log_dt_k;
  }
  if (!(sigma > 0.0)) {
    if (!any_nonzero) throw ConfigError("loglik_poly: sigma = 0 gives a degenerate density");
    LogLikelihood ll;
    ll.K = K;
    ll.n = n;
    ll.total = ll.normalized = -std::numeric_limits<double>::infinity();
    ll.neg_infinite = true;
    return ll;
  }
  return finish(sum, K, n, m.dt);
}

LogLikelihood loglik_rnn(const Trajectory& traj, const RnnModel& m, std::vector<double>* per_step) {
  check_dt(traj, m.dt());
  const std::size_t K = static_cast<std::size_t>(traj.K);
  const std::size_t n = traj.rows() - 1;
  const double sigma = m.sigma();
  const double log_dt_k = static_cast<double>(K) * std::log(m.dt());
  if (per_step) per_step->assign(n, 0.0);

  HiddenState hs = HiddenState::zeros(traj.K, m.arch().hidden_size());
  std::vector<double> omega(K);
  std::vector<double> scratch(2 * K);
  double sum = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const auto xt = traj.row(t);
    const auto xn = traj.row(t + 1);
    rk2_omega(xt, traj.F, m.dt(), omega, scratch);
    double step = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      auto l = hs.l_of(static_cast<int>(k));
      rnn_hidden_update(m, l, hs.r[k]);
      const double r = (xt[k] + omega[k] - xn[k]) / m.dt() - rnn_subgrid_g(m, xt[k]);
      step += normal_logpdf(r, rnn_residual_mean(m, l), sigma);
      hs.r[k] = r;
    }
    sum += step;
    if (per_step) (*per_step)[t] = step - log_dt_k;
  }
  return finish(sum, K, n, m.dt());
}

std::vector<double> window_profile(const std::vector<double>& per_step, std::size_t K,
                                   std::size_t window) {
  std::vector<double> out;
  if (window == 0 || K == 0) return out;
  for (std::size_t start = 0; start + window <= per_step.size(); start += window) {
    double s = 0.0;
    for (std::size_t t = start; t < start + window; ++t) s += per_step[t];
    out.push_back(s / static_cast<double>(K * window));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace l96sp
