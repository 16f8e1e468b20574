#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace l96sp {

struct AdamHyper {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::uint64_t step = 0;

  static AdamState zeros(std::size_t n) { return {std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), 0}; }
};

/// One bias-corrected Adam update of `params` in place.
void adam_update(std::span<double> params, std::span<const double> grads, AdamState& state,
                 double rate, const AdamHyper& hyper = {});

}  // namespace l96sp
