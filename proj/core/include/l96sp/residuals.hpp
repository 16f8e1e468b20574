#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "l96sp/dynamics.hpp"

namespace l96sp {

/// Observed sub-grid residuals r_hat_{t+1} = (x_t + omega(x_t) - x_{t+1}) / dt
/// paired with the x_t they follow. Rows are (T - 1) per source trajectory;
/// segments keep trajectories (and forcings) apart.
struct ResidualDataset {
  struct Segment {
    std::size_t start = 0;   // first row
    std::size_t length = 0;  // rows
    double F = 0.0;
  };

  int K = 0;
  double dt = 0.0;
  std::vector<double> r_targets;  // rows x K
  std::vector<double> x_inputs;   // rows x K
  std::vector<Segment> segments;

  std::size_t rows() const { return K > 0 ? r_targets.size() / static_cast<std::size_t>(K) : 0; }
  bool empty() const { return rows() == 0; }
  double r(std::size_t row, int k) const { return r_targets[row * static_cast<std::size_t>(K) + static_cast<std::size_t>(k)]; }
  double x(std::size_t row, int k) const { return x_inputs[row * static_cast<std::size_t>(K) + static_cast<std::size_t>(k)]; }

  /// Appends the residuals of `traj` as a new segment. Throws ConfigError
  /// when K or dt disagree with what is already stored.
  void append(const Trajectory& traj);
};

/// Residuals of a single trajectory (needs >= 2 rows). dt is traj.dt_save.
ResidualDataset extract_residuals(const Trajectory& traj);

/// Rebuilds x_{t+1} = x_t + omega(x_t) - dt r_hat_{t+1} from the first state.
Trajectory reconstruct_trajectory(std::span<const double> x0, const ResidualDataset& ds,
                                  std::size_t segment = 0);

}  // namespace l96sp
