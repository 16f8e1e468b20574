#pragma once

namespace l96sp {

/// First-order autoregressive (red-noise) parameters. `sigma` is the
/// stationary standard deviation.
struct Ar1Params {
  double phi = 0.0;
  double sigma = 0.0;

  /// Throws ConfigError unless |phi| < 1 and sigma >= 0.
  void validate() const;
};

/// h' = phi * h + sigma * sqrt(1 - phi^2) * z
double ar1_step(double h, const Ar1Params& p, double z);

}  // namespace l96sp
