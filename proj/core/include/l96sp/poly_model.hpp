#pragma once

#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "l96sp/ar1.hpp"
#include "l96sp/dynamics.hpp"
#include "l96sp/rng.hpp"

namespace l96sp {

/// Cubic sub-grid tendency with AR1 red noise:
///   x_k <- x_k + omega_k(x) - dt (a x_k^3 + b x_k^2 + c x_k + d + h_k).
/// The coefficients a..d are unrelated to the L96 constants b, c.
struct PolyModel {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  Ar1Params ar1;
  double F = 20.0;   // forcing the model was fitted under
  double dt = 0.005;
  nlohmann::json diagnostics = nlohmann::json::object();

  double tendency(double x) const { return ((a * x + b) * x + c) * x + d; }
  void validate() const;
};

/// AR1 noise per gridpoint. Until `primed`, the next draw is h = sigma z.
struct PolyState {
  std::vector<double> h;
  bool primed = false;

  static PolyState fresh(int K) { return {std::vector<double>(static_cast<std::size_t>(K), 0.0), false}; }
};

/// One step with explicit noise z (length K). Returns false on blow-up.
bool poly_step(const PolyModel& m, std::span<double> x, PolyState& st, double F,
               std::span<const double> z);
bool poly_step(const PolyModel& m, std::span<double> x, PolyState& st, double F,
               std::span<RngStream> streams);

/// Primes the AR1 state with the last observed noise value
/// h = (x_{t} + omega(x_t) - x_{t+1}) / dt - P(x_t) at row end_row - 1.
PolyState poly_warm_start(const PolyModel& m, const Trajectory& history, std::size_t end_row,
                          double F);

}  // namespace l96sp
