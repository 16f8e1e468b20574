#include "l96sp/regimes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "l96sp/error.hpp"

namespace l96sp {

RegimeBasis pca_fit(const Trajectory& traj) {
  const auto K = static_cast<std::size_t>(traj.K);
  const std::size_t T = traj.rows();
  if (T <= K) throw ConfigError("pca_fit: need more rows than gridpoints");
  RegimeBasis basis;
  basis.K = traj.K;
  basis.mean.assign(K, 0.0);
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t k = 0; k < K; ++k) basis.mean[k] += traj.data[t * K + k];
  for (auto& m : basis.mean) m /= static_cast<double>(T);

  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(K));
  Eigen::VectorXd a(static_cast<Eigen::Index>(K));
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t k = 0; k < K; ++k) a[static_cast<Eigen::Index>(k)] = traj.data[t * K + k] - basis.mean[k];
    cov.selfadjointView<Eigen::Lower>().rankUpdate(a);
  }
  cov = cov.selfadjointView<Eigen::Lower>();
  cov /= static_cast<double>(T - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw NumericalError("pca_fit: eigen decomposition failed");
  const Eigen::VectorXd& ev = solver.eigenvalues();  // ascending
  const Eigen::MatrixXd& vecs = solver.eigenvectors();
  basis.eof.assign(K * K, 0.0);
  basis.explained.assign(K, 0.0);
  const double top = std::max(ev[static_cast<Eigen::Index>(K - 1)], 0.0);
  for (std::size_t j = 0; j < K; ++j) {
    const auto src = static_cast<Eigen::Index>(K - 1 - j);
    basis.explained[j] = std::max(ev[src], 0.0);
    if (basis.explained[j] <= 1e-12 * std::max(top, 1e-300)) basis.rank_deficient = true;
    std::size_t imax = 0;
    for (std::size_t i = 1; i < K; ++i)
      if (std::abs(vecs(static_cast<Eigen::Index>(i), src)) >
          std::abs(vecs(static_cast<Eigen::Index>(imax), src)))
        imax = i;
    const double sign = vecs(static_cast<Eigen::Index>(imax), src) < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < K; ++i)
      basis.eof[j * K + i] = sign * vecs(static_cast<Eigen::Index>(i), src);
  }
  return basis;
}

std::vector<double> pc_scores(const Trajectory& traj, const RegimeBasis& basis) {
  if (traj.K != basis.K) throw ConfigError("pc_scores: K differs from the basis");
  const auto K = static_cast<std::size_t>(traj.K);
  const std::size_t T = traj.rows();
  std::vector<double> out(T * K, 0.0);
  std::vector<double> a(K);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t k = 0; k < K; ++k) a[k] = traj.data[t * K + k] - basis.mean[k];
    for (std::size_t j = 0; j < K; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < K; ++i) s += basis.eof[j * K + i] * a[i];
      out[t * K + j] = s;
    }
  }
  return out;
}

RegimeSeries regime_projection(const Trajectory& traj, const RegimeBasis& basis) {
  if (basis.K < 4) throw ConfigError("regime_projection: need at least 4 components");
  const auto scores = pc_scores(traj, basis);
  const auto K = static_cast<std::size_t>(traj.K);
  RegimeSeries s;
  const std::size_t T = traj.rows();
  s.pc12.resize(T);
  s.pc34.resize(T);
  for (std::size_t t = 0; t < T; ++t) {
    const double* p = scores.data() + t * K;
    s.pc12[t] = std::hypot(p[0], p[1]);
    s.pc34[t] = std::hypot(p[2], p[3]);
  }
  return s;
}

RegimeHistograms regime_histograms(const RegimeSeries& s, const HistogramSpec& spec12,
                                   const HistogramSpec& spec34, std::size_t bins2d) {
  RegimeHistograms h;
  h.pc12 = histogram(s.pc12, spec12);
  h.pc34 = histogram(s.pc34, spec34);
  HistogramSpec x = spec12;
  HistogramSpec y = spec34;
  x.bins = bins2d;
  y.bins = bins2d;
  h.joint = histogram2d(s.pc12, s.pc34, x, y);
  return h;
}

std::vector<double> wavenumber_power(const std::vector<double>& v) {
  const std::size_t K = v.size();
  std::vector<double> power(K / 2 + 1, 0.0);
  for (std::size_t n = 0; n <= K / 2; ++n) {
    double re = 0.0, im = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      const double ang = 2.0 * std::numbers::pi * static_cast<double>(n * k) / static_cast<double>(K);
      re += v[k] * std::cos(ang);
      im -= v[k] * std::sin(ang);
    }
    power[n] = re * re + im * im;
  }
  return power;
}

int dominant_wavenumber(const std::vector<double>& v) {
  const auto p = wavenumber_power(v);
  return static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
}

std::vector<double> eof_column(const RegimeBasis& basis, int j) {
  const auto K = static_cast<std::size_t>(basis.K);
  const auto off = static_cast<std::size_t>(j) * K;
  return {basis.eof.begin() + static_cast<std::ptrdiff_t>(off),
          basis.eof.begin() + static_cast<std::ptrdiff_t>(off + K)};
}

double minor_regime_fraction(const RegimeSeries& s, double threshold) {
  if (s.pc34.empty()) return 0.0;
  std::size_t n = 0;
  for (double v : s.pc34)
    if (v > threshold) ++n;
  return static_cast<double>(n) / static_cast<double>(s.pc34.size());
}

}  // namespace l96sp
