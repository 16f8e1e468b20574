#include "l96sp/ar1.hpp"

#include <cmath>

#include "l96sp/error.hpp"

namespace l96sp {

void Ar1Params::validate() const {
  if (!(std::abs(phi) < 1.0)) throw ConfigError("Ar1Params: |phi| must be < 1");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ConfigError("Ar1Params: sigma must be >= 0");
}

double ar1_step(double h, const Ar1Params& p, double z) {
  return p.phi * h + p.sigma * std::sqrt(1.0 - p.phi * p.phi) * z;
}

}  // namespace l96sp
