#include "l96sp/poly_fit.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "l96sp/error.hpp"

namespace l96sp {

PolyModel fit_polynomial(const ResidualDataset& ds) {
  if (ds.empty()) throw ConfigError("fit_polynomial: empty dataset");
  const auto n = static_cast<Eigen::Index>(ds.r_targets.size());
  Eigen::MatrixXd A(n, 4);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = ds.x_inputs[static_cast<std::size_t>(i)];
    A(i, 0) = x * x * x;
    A(i, 1) = x * x;
    A(i, 2) = x;
    A(i, 3) = 1.0;
    y(i) = ds.r_targets[static_cast<std::size_t>(i)];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  qr.setThreshold(1e-12);
  if (qr.rank() < 4)
    throw NumericalError("fit_polynomial: singular design (degenerate x distribution)");
  const Eigen::VectorXd coef = qr.solve(y);

  PolyModel m;
  m.a = coef(0);
  m.b = coef(1);
  m.c = coef(2);
  m.d = coef(3);
  m.dt = ds.dt;
  m.F = ds.segments.empty() ? 0.0 : ds.segments.front().F;

  std::vector<double> e(ds.r_targets.size());
  double sse = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    e[i] = ds.r_targets[i] - m.tendency(ds.x_inputs[i]);
    sse += e[i] * e[i];
    mean_y += ds.r_targets[i];
  }
  mean_y /= static_cast<double>(e.size());
  double sst = 0.0;
  for (double v : ds.r_targets) sst += (v - mean_y) * (v - mean_y);

  const std::size_t K = static_cast<std::size_t>(ds.K);
  double num = 0.0;
  double den_a = 0.0;
  double den_b = 0.0;
  for (const auto& seg : ds.segments) {
    for (std::size_t t = seg.start; t + 1 < seg.start + seg.length; ++t) {
      for (std::size_t k = 0; k < K; ++k) {
        const double e0 = e[t * K + k];
        const double e1 = e[(t + 1) * K + k];
        num += e0 * e1;
        den_a += e0 * e0;
        den_b += e1 * e1;
      }
    }
  }
  const double den = std::sqrt(den_a * den_b);
  double phi = den > 0.0 ? num / den : 0.0;
  phi = std::clamp(phi, -1.0 + 1e-12, 1.0 - 1e-12);
  m.ar1 = {phi, std::sqrt(sse / static_cast<double>(e.size()))};

  m.diagnostics = {
      {"r2", sst > 0.0 ? 1.0 - sse / sst : 1.0},
      {"residual_sd", m.ar1.sigma},
      {"points", e.size()},
      {"fit", "ols(x^3,x^2,x,1); phi=lag-1 autocorrelation; sigma=rms residual"},
  };
  return m;
}

}  // namespace l96sp
