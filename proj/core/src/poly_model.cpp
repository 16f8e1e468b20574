#include "l96sp/poly_model.hpp"

#include <cmath>

#include "l96sp/error.hpp"

namespace l96sp {

void PolyModel::validate() const {
  for (double v : {a, b, c, d, F, dt})
    if (!std::isfinite(v)) throw ConfigError("PolyModel: non-finite field");
  if (!(dt > 0.0)) throw ConfigError("PolyModel: dt must be positive");
  ar1.validate();
}

bool poly_step(const PolyModel& m, std::span<double> x, PolyState& st, double F,
               std::span<const double> z) {
  const std::size_t K = x.size();
  std::vector<double> omega(K);
  std::vector<double> scratch(2 * K);
  rk2_omega(x, F, m.dt, omega, scratch);
  for (std::size_t k = 0; k < K; ++k) {
    st.h[k] = st.primed ? ar1_step(st.h[k], m.ar1, z[k]) : m.ar1.sigma * z[k];
    x[k] = x[k] + omega[k] - m.dt * (m.tendency(x[k]) + st.h[k]);
  }
  st.primed = true;
  return within_bounds(x);
}

bool poly_step(const PolyModel& m, std::span<double> x, PolyState& st, double F,
               std::span<RngStream> streams) {
  std::vector<double> z(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) z[k] = streams[k].gaussian();
  return poly_step(m, x, st, F, z);
}

PolyState poly_warm_start(const PolyModel& m, const Trajectory& history, std::size_t end_row,
                          double F) {
  PolyState st = PolyState::fresh(history.K);
  if (end_row < 2 || end_row > history.rows()) return st;
  const auto xt = history.row(end_row - 2);
  const auto xn = history.row(end_row - 1);
  const auto omega = rk2_omega(xt, F, m.dt);
  for (std::size_t k = 0; k < xt.size(); ++k)
    st.h[k] = (xt[k] + omega[k] - xn[k]) / m.dt - m.tendency(xt[k]);
  st.primed = true;
  return st;
}

}  // namespace l96sp
