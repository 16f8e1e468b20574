#include "l96sp/residuals.hpp"

#include <cmath>

#include "l96sp/error.hpp"

namespace l96sp {

void ResidualDataset::append(const Trajectory& traj) {
  if (traj.rows() < 2) throw ConfigError("extract_residuals: trajectory needs at least 2 rows");
  if (K == 0) {
    K = traj.K;
    dt = traj.dt_save;
  } else if (K != traj.K || std::abs(dt - traj.dt_save) > 1e-12 * dt) {
    throw ConfigError("ResidualDataset: trajectories disagree on K or dt_save");
  }
  const std::size_t Kz = static_cast<std::size_t>(K);
  const std::size_t n = traj.rows() - 1;
  Segment seg{rows(), n, traj.F};
  r_targets.reserve(r_targets.size() + n * Kz);
  x_inputs.reserve(x_inputs.size() + n * Kz);
  std::vector<double> omega(Kz);
  std::vector<double> scratch(2 * Kz);
  for (std::size_t t = 0; t < n; ++t) {
    const auto xt = traj.row(t);
    const auto xn = traj.row(t + 1);
    rk2_omega(xt, traj.F, dt, omega, scratch);
    for (std::size_t k = 0; k < Kz; ++k) {
      r_targets.push_back((xt[k] + omega[k] - xn[k]) / dt);
      x_inputs.push_back(xt[k]);
    }
  }
  segments.push_back(seg);
}

ResidualDataset extract_residuals(const Trajectory& traj) {
  ResidualDataset ds;
  ds.append(traj);
  return ds;
}

Trajectory reconstruct_trajectory(std::span<const double> x0, const ResidualDataset& ds,
                                  std::size_t segment) {
  const auto& seg = ds.segments.at(segment);
  Trajectory out;
  out.K = ds.K;
  out.F = seg.F;
  out.dt_save = ds.dt;
  out.append(x0);
  std::vector<double> x(x0.begin(), x0.end());
  for (std::size_t t = 0; t < seg.length; ++t) {
    const auto omega = rk2_omega(x, seg.F, ds.dt);
    for (int k = 0; k < ds.K; ++k)
      x[static_cast<std::size_t>(k)] += omega[static_cast<std::size_t>(k)] - ds.dt * ds.r(seg.start + t, k);
    out.append(x);
  }
  return out;
}

}  // namespace l96sp
