#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "l96sp/dynamics.hpp"

namespace l96sp {

struct HistogramSpec {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t bins = 100;
  double smoothing_eps = 1e-12;

  void validate() const;
  double width() const { return (hi - lo) / static_cast<double>(bins); }
  /// Edges, bins + 1 values.
  std::vector<double> edges() const;
};

struct Histogram {
  HistogramSpec spec;
  std::vector<double> mass;  // sums to 1
  std::size_t count = 0;
  std::size_t below = 0;     // clamped into the first bin
  std::size_t above = 0;     // clamped into the last bin
};

/// Normalized bin masses; out-of-range values land in the edge bins and are
/// counted in below/above. An empty input gives all-zero masses.
Histogram histogram(std::span<const double> values, const HistogramSpec& spec);

struct Histogram2d {
  HistogramSpec xspec;
  HistogramSpec yspec;
  std::vector<double> mass;  // row-major, x bins outer
  std::size_t count = 0;
  std::size_t clamped = 0;
};

Histogram2d histogram2d(std::span<const double> x, std::span<const double> y,
                        const HistogramSpec& xspec, const HistogramSpec& yspec);

/// KL(q || p) = sum over q > 0 of q log(q / p). p is floored at eps on the
/// bins where q > 0, then renormalized. Throws ConfigError on size mismatch.
double kl_divergence(std::span<const double> q, std::span<const double> p, double eps = 1e-12);

/// 1D X-histogram default: truth min/max extended 5% each side, 100 bins.
HistogramSpec default_x_spec(std::span<const double> truth_values, std::size_t bins = 100,
                             double pad = 0.05);

/// Centered moving average over round(window / dt_save) rows per gridpoint;
/// output has rows - w + 1 rows. Throws ConfigError if the window is
/// shorter than one step or longer than the trajectory.
Trajectory smooth_running_mean(const Trajectory& traj, double window);

/// KL of truth against each fifth of `model_values` (the run split into five
/// equal consecutive parts, trailing remainder dropped).
std::vector<double> fifths_kl(std::span<const double> truth_values,
                              std::span<const double> model_values, const HistogramSpec& spec);

}  // namespace l96sp
