#pragma once

#include <cstddef>
#include <vector>

#include "l96sp/dynamics.hpp"
#include "l96sp/poly_model.hpp"
#include "l96sp/rnn_model.hpp"

namespace l96sp {

/// Exact sequence log-likelihood obtained by the change of variables from
/// states to residuals; `total` includes the -K n log(dt) Jacobian and
/// `normalized` = total / (K n).
struct LogLikelihood {
  double total = 0.0;
  double normalized = 0.0;
  std::size_t K = 0;
  std::size_t n = 0;
  /// Set when sigma = 0 meets a non-zero residual; total is then -inf.
  bool neg_infinite = false;
};

double normal_logpdf(double x, double mean, double sd);

/// h_t recovered from consecutive states; h_1 ~ N(0, sigma^2),
/// h_{t+1} | h_t ~ N(phi h_t, sigma^2 (1 - phi^2)). Omega uses traj.F.
/// If `per_step` is given it receives n entries (sum over k of the step's
/// log-density minus K log dt) that add up to `total`.
LogLikelihood loglik_poly(const Trajectory& traj, const PolyModel& m,
                          std::vector<double>* per_step = nullptr);

/// r_t = r_hat_t - g(x_{t-1}); l_1 = s(0, 0), l_{t+1} = s(l_t, r_t);
/// r_t | l_t ~ N(b(l_t), sigma^2).
LogLikelihood loglik_rnn(const Trajectory& traj, const RnnModel& m,
                         std::vector<double>* per_step = nullptr);

/// Normalized log-likelihood of consecutive `window`-step blocks of a
/// per-step profile (trailing partial block dropped), sorted ascending.
std::vector<double> window_profile(const std::vector<double>& per_step, std::size_t K,
                                   std::size_t window = 200);

}  // namespace l96sp
