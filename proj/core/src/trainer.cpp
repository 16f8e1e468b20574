#include "l96sp/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "l96sp/error.hpp"
#include "l96sp/model_io.hpp"
#include "l96sp/rng.hpp"

namespace l96sp {

void TrainConfig::validate() const {
  if (seq_len < 2) throw ConfigError("TrainConfig: seq_len must be >= 2");
  if (batch < 1) throw ConfigError("TrainConfig: batch must be >= 1");
  if (epochs < 0) throw ConfigError("TrainConfig: epochs must be >= 0");
  if (lr_schedule.empty() || lr_schedule.front().first != 0)
    throw ConfigError("TrainConfig: lr_schedule must start at epoch 0");
  for (std::size_t i = 0; i < lr_schedule.size(); ++i) {
    if (!(lr_schedule[i].second > 0.0)) throw ConfigError("TrainConfig: rates must be positive");
    if (i > 0 && lr_schedule[i].first <= lr_schedule[i - 1].first)
      throw ConfigError("TrainConfig: lr_schedule epochs must increase");
  }
}

double TrainConfig::rate_for(int epoch) const {
  double rate = lr_schedule.front().second;
  for (const auto& [start, r] : lr_schedule)
    if (epoch >= start) rate = r;
  return rate;
}

nlohmann::json to_json(const EpochRecord& r) {
  return {{"epoch", r.epoch},
          {"train_loss", r.train_loss},
          {"valid_loss", r.valid_loss},
          {"lr", r.lr},
          {"wall_time", r.wall_time}};
}

nlohmann::json to_json(const TrainCheckpoint& c) {
  nlohmann::json log = nlohmann::json::array();
  for (const auto& r : c.log) log.push_back(to_json(r));
  return {{"format", "l96sp-train-checkpoint"},
          {"version", 1},
          {"model", model_to_json(c.model)},
          {"best", model_to_json(c.best)},
          {"adam", {{"m", c.adam.m}, {"v", c.adam.v}, {"step", c.adam.step}}},
          {"next_epoch", c.next_epoch},
          {"best_epoch", c.best_epoch},
          {"best_valid", c.best_valid},
          {"log", log}};
}

TrainCheckpoint checkpoint_from_json(const nlohmann::json& j) {
  try {
    if (j.value("format", "") != "l96sp-train-checkpoint")
      throw IoError("not a training checkpoint");
    TrainCheckpoint c;
    c.model = std::get<RnnModel>(model_from_json(j.at("model")));
    c.best = std::get<RnnModel>(model_from_json(j.at("best")));
    c.adam.m = j.at("adam").at("m").get<std::vector<double>>();
    c.adam.v = j.at("adam").at("v").get<std::vector<double>>();
    c.adam.step = j.at("adam").at("step").get<std::uint64_t>();
    c.next_epoch = j.at("next_epoch").get<int>();
    c.best_epoch = j.at("best_epoch").get<int>();
    c.best_valid = j.at("best_valid").get<double>();
    for (const auto& r : j.at("log"))
      c.log.push_back({r.at("epoch").get<int>(), r.at("train_loss").get<double>(),
                       r.at("valid_loss").get<double>(), r.at("lr").get<double>(),
                       r.at("wall_time").get<double>()});
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("training checkpoint: ") + e.what());
  } catch (const std::bad_variant_access&) {
    throw IoError("training checkpoint: model is not an RNN");
  }
}

NormStats estimate_norm_stats(const ResidualDataset& ds) {
  if (ds.empty()) throw ConfigError("estimate_norm_stats: empty dataset");
  auto mean_sd = [](const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    var /= static_cast<double>(v.size());
    return std::pair{mean, var > 0.0 ? std::sqrt(var) : 1.0};
  };
  NormStats n;
  std::tie(n.x_mean, n.x_sd) = mean_sd(ds.x_inputs);
  std::tie(n.r_mean, n.r_sd) = mean_sd(ds.r_targets);
  return n;
}

TrainResult train_rnn(const RnnModel& init, const ResidualDataset& train,
                      const ResidualDataset& valid, const TrainConfig& cfg,
                      const EpochCallback& on_epoch, const TrainCheckpoint* resume) {
  cfg.validate();
  if (train.empty() || valid.empty()) throw ConfigError("train_rnn: empty dataset");
  if (std::abs(train.dt - init.dt()) > 1e-12 * init.dt() ||
      std::abs(valid.dt - init.dt()) > 1e-12 * init.dt())
    throw ConfigError("train_rnn: dataset dt differs from the model time step");
  const auto base_windows = make_windows(train, cfg.seq_len);
  const auto valid_windows = make_windows(valid, cfg.seq_len);
  if (base_windows.empty()) throw ConfigError("train_rnn: training segments shorter than seq_len");
  if (valid_windows.empty()) throw ConfigError("train_rnn: validation segments shorter than seq_len");

  TrainCheckpoint state =
      resume ? *resume
             : TrainCheckpoint{init, init, AdamState::zeros(init.params().size()), 0, -1, 0.0, {}};
  if (state.adam.m.size() != state.model.params().size())
    throw ConfigError("train_rnn: checkpoint does not match the model");

  const auto start = std::chrono::steady_clock::now();
  const double offset = state.log.empty() ? 0.0 : state.log.back().wall_time;
  for (int epoch = state.next_epoch; epoch < cfg.epochs; ++epoch) {
    const double rate = cfg.rate_for(epoch);
    // Each epoch permutes the base order so a resumed run sees the same batches.
    auto windows = base_windows;
    RngStream shuffler(cfg.seed, 0x5eed0000ULL + static_cast<std::uint64_t>(epoch));
    std::shuffle(windows.begin(), windows.end(), shuffler);

    double loss_sum = 0.0;
    std::size_t loss_terms = 0;
    for (std::size_t b = 0; b < windows.size(); b += cfg.batch) {
      const std::size_t e = std::min(windows.size(), b + cfg.batch);
      const std::span<const Window> batch(windows.data() + b, e - b);
      const auto lg = rnn_grad(state.model, train, batch);
      if (!std::isfinite(lg.loss))
        throw NumericalError("train_rnn: non-finite training loss at epoch " + std::to_string(epoch));
      adam_update(state.model.params(), lg.grad, state.adam, rate, cfg.adam);
      loss_sum += lg.loss * static_cast<double>(e - b);
      loss_terms += e - b;
    }
    const double valid_loss = rnn_loss(state.model, valid, valid_windows);
    if (!std::isfinite(valid_loss))
      throw NumericalError("train_rnn: non-finite validation loss at epoch " + std::to_string(epoch));

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = loss_sum / static_cast<double>(loss_terms);
    rec.valid_loss = valid_loss;
    rec.lr = rate;
    rec.wall_time =
        offset + std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    state.log.push_back(rec);
    if (state.best_epoch < 0 || valid_loss < state.best_valid) {
      state.best_valid = valid_loss;
      state.best_epoch = epoch;
      state.best = state.model;
    }
    state.next_epoch = epoch + 1;
    if (on_epoch) on_epoch(rec, state);
  }

  TrainResult res{state.best, state.best_epoch, state.best_valid, state.log, state};
  res.best.provenance["training"] = {
      {"best_epoch", state.best_epoch},
      {"best_valid_loss", state.best_valid},
      {"epochs", cfg.epochs},
      {"seq_len", cfg.seq_len},
      {"batch", cfg.batch},
      {"seed", cfg.seed},
      {"adam", {{"beta1", cfg.adam.beta1}, {"beta2", cfg.adam.beta2}, {"eps", cfg.adam.eps}}},
      {"hidden_state", "reset to zero per window"},
  };
  return res;
}

}  // namespace l96sp
