#include "l96sp/climate.hpp"

#include <algorithm>
#include <cmath>

#include "l96sp/error.hpp"

namespace l96sp {

void HistogramSpec::validate() const {
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi))
    throw ConfigError("HistogramSpec: need finite hi > lo");
  if (bins < 2) throw ConfigError("HistogramSpec: bins must be >= 2");
  if (!(smoothing_eps > 0.0)) throw ConfigError("HistogramSpec: smoothing_eps must be positive");
}

std::vector<double> HistogramSpec::edges() const {
  std::vector<double> e(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i)
    e[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
  return e;
}

namespace {

// Bin index with clamping; `side` is -1 below, +1 above, 0 inside.
std::size_t bin_of(const HistogramSpec& s, double v, int& side) {
  side = 0;
  if (v < s.lo) {
    side = -1;
    return 0;
  }
  if (v >= s.hi) {
    // hi itself belongs to the last bin
    if (v > s.hi) side = 1;
    return s.bins - 1;
  }
  auto i = static_cast<std::size_t>((v - s.lo) / s.width());
  return std::min(i, s.bins - 1);
}

}  // namespace

Histogram histogram(std::span<const double> values, const HistogramSpec& spec) {
  spec.validate();
  Histogram h;
  h.spec = spec;
  std::vector<std::size_t> counts(spec.bins, 0);
  for (double v : values) {
    if (std::isnan(v)) throw NumericalError("histogram: NaN value");
    int side;
    ++counts[bin_of(spec, v, side)];
    if (side < 0) ++h.below;
    if (side > 0) ++h.above;
  }
  h.count = values.size();
  h.mass.assign(spec.bins, 0.0);
  if (h.count > 0)
    for (std::size_t i = 0; i < spec.bins; ++i)
      h.mass[i] = static_cast<double>(counts[i]) / static_cast<double>(h.count);
  return h;
}

Histogram2d histogram2d(std::span<const double> x, std::span<const double> y,
                        const HistogramSpec& xspec, const HistogramSpec& yspec) {
  xspec.validate();
  yspec.validate();
  if (x.size() != y.size()) throw ConfigError("histogram2d: x and y differ in length");
  Histogram2d h;
  h.xspec = xspec;
  h.yspec = yspec;
  std::vector<std::size_t> counts(xspec.bins * yspec.bins, 0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    int sx, sy;
    const std::size_t bx = bin_of(xspec, x[i], sx);
    const std::size_t by = bin_of(yspec, y[i], sy);
    ++counts[bx * yspec.bins + by];
    if (sx != 0 || sy != 0) ++h.clamped;
  }
  h.count = x.size();
  h.mass.assign(counts.size(), 0.0);
  if (h.count > 0)
    for (std::size_t i = 0; i < counts.size(); ++i)
      h.mass[i] = static_cast<double>(counts[i]) / static_cast<double>(h.count);
  return h;
}

double kl_divergence(std::span<const double> q, std::span<const double> p, double eps) {
  if (q.size() != p.size()) throw ConfigError("kl_divergence: histograms differ in binning");
  if (!(eps > 0.0)) throw ConfigError("kl_divergence: eps must be positive");
  // Only bins that contribute (q > 0) are floored; bins empty under q keep
  // their mass so identical histograms give exactly zero.
  double norm = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) norm += q[i] > 0.0 ? std::max(p[i], eps) : p[i];
  double kl = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] <= 0.0) continue;
    const double pi = std::max(p[i], eps) / norm;
    kl += q[i] * std::log(q[i] / pi);
  }
  return std::max(kl, 0.0);  // rounding can leave -1e-15 for identical inputs
}

HistogramSpec default_x_spec(std::span<const double> truth_values, std::size_t bins, double pad) {
  if (truth_values.empty()) throw ConfigError("default_x_spec: no values");
  const auto [mn, mx] = std::minmax_element(truth_values.begin(), truth_values.end());
  double lo = *mn;
  double hi = *mx;
  if (hi <= lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double ext = pad * (hi - lo);
  HistogramSpec s;
  s.lo = lo - ext;
  s.hi = hi + ext;
  s.bins = bins;
  return s;
}

Trajectory smooth_running_mean(const Trajectory& traj, double window) {
  if (!(window >= traj.dt_save * (1.0 - 1e-9)))
    throw ConfigError("smooth_running_mean: window shorter than one step");
  const auto w = static_cast<std::size_t>(std::llround(window / traj.dt_save));
  const std::size_t T = traj.rows();
  if (w > T) throw ConfigError("smooth_running_mean: trajectory shorter than the window");
  const auto K = static_cast<std::size_t>(traj.K);
  Trajectory out;
  out.K = traj.K;
  out.F = traj.F;
  out.dt_save = traj.dt_save;
  out.seed = traj.seed;
  // Output row i averages rows [i, i + w); centered at t0 + (i + (w-1)/2) dt.
  out.t0 = traj.t0 + 0.5 * static_cast<double>(w - 1) * traj.dt_save;
  const std::size_t n = T - w + 1;
  out.data.assign(n * K, 0.0);
  // Running sums re-seeded periodically to bound drift.
  std::vector<double> sum(K, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (i % 4096 == 0) {
      std::fill(sum.begin(), sum.end(), 0.0);
      for (std::size_t t = i; t < i + w; ++t)
        for (std::size_t k = 0; k < K; ++k) sum[k] += traj.data[t * K + k];
    } else {
      for (std::size_t k = 0; k < K; ++k)
        sum[k] += traj.data[(i + w - 1) * K + k] - traj.data[(i - 1) * K + k];
    }
    for (std::size_t k = 0; k < K; ++k) out.data[i * K + k] = sum[k] / static_cast<double>(w);
  }
  return out;
}

std::vector<double> fifths_kl(std::span<const double> truth_values,
                              std::span<const double> model_values, const HistogramSpec& spec) {
  const auto q = histogram(truth_values, spec);
  const std::size_t part = model_values.size() / 5;
  if (part == 0) throw ConfigError("fifths_kl: model run too short to split");
  std::vector<double> out;
  for (std::size_t i = 0; i < 5; ++i) {
    const auto p = histogram(model_values.subspan(i * part, part), spec);
    out.push_back(kl_divergence(q.mass, p.mass, spec.smoothing_eps));
  }
  return out;
}

}  // namespace l96sp
