#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "l96sp/likelihood.hpp"
#include "l96sp/simulate.hpp"

namespace l96sp {

LogLikelihood loglik_model(const Trajectory& traj, const Model& m,
                           std::vector<double>* per_step = nullptr);

struct HoldoutEntry {
  std::string model;
  double F = 0.0;
  LogLikelihood ll;
  std::vector<double> window_profile;  // sorted, 200-step windows
  bool exploded = false;               // likelihood -inf or non-finite
};

struct NamedModel {
  std::string name;
  Model model;
};

/// One entry per (model, hold-out trajectory), models outer.
std::vector<HoldoutEntry> holdout_likelihood_table(const std::vector<NamedModel>& models,
                                                   const std::vector<Trajectory>& holdouts,
                                                   std::size_t window = 200);

nlohmann::json to_json(const std::vector<HoldoutEntry>& table);

}  // namespace l96sp
