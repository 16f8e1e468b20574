#include "l96sp/holdout.hpp"

#include <cmath>

namespace l96sp {

LogLikelihood loglik_model(const Trajectory& traj, const Model& m, std::vector<double>* per_step) {
  if (const auto* p = std::get_if<PolyModel>(&m)) return loglik_poly(traj, *p, per_step);
  return loglik_rnn(traj, std::get<RnnModel>(m), per_step);
}

std::vector<HoldoutEntry> holdout_likelihood_table(const std::vector<NamedModel>& models,
                                                   const std::vector<Trajectory>& holdouts,
                                                   std::size_t window) {
  std::vector<HoldoutEntry> table;
  for (const auto& nm : models) {
    for (const auto& traj : holdouts) {
      HoldoutEntry e;
      e.model = nm.name;
      e.F = traj.F;
      std::vector<double> per_step;
      e.ll = loglik_model(traj, nm.model, &per_step);
      e.exploded = e.ll.neg_infinite || !std::isfinite(e.ll.total);
      if (!e.exploded) e.window_profile = window_profile(per_step, e.ll.K, window);
      table.push_back(std::move(e));
    }
  }
  return table;
}

nlohmann::json to_json(const std::vector<HoldoutEntry>& table) {
  auto rows = nlohmann::json::array();
  for (const auto& e : table) {
    nlohmann::json r = {{"model", e.model}, {"F", e.F}, {"steps", e.ll.n}, {"K", e.ll.K},
                        {"exploded", e.exploded}, {"window_profile", e.window_profile}};
    if (e.exploded) {
      r["normalized"] = nullptr;
      r["total"] = nullptr;
    } else {
      r["normalized"] = e.ll.normalized;
      r["total"] = e.ll.total;
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace l96sp
