#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "l96sp/adam.hpp"
#include "l96sp/residuals.hpp"
#include "l96sp/rnn_grad.hpp"
#include "l96sp/rnn_model.hpp"

namespace l96sp {

struct TrainConfig {
  std::size_t seq_len = 700;
  std::size_t batch = 32;
  int epochs = 100;
  /// (first epoch, rate) pairs, sorted by epoch; the first must start at 0.
  std::vector<std::pair<int, double>> lr_schedule{{0, 1e-4}, {70, 3e-5}};
  AdamHyper adam;
  std::uint64_t seed = 0;

  void validate() const;
  double rate_for(int epoch) const;
};

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double valid_loss = 0.0;
  double lr = 0.0;
  double wall_time = 0.0;  // seconds since training started
};

nlohmann::json to_json(const EpochRecord& r);

/// Everything needed to continue training after `next_epoch - 1`.
struct TrainCheckpoint {
  RnnModel model;
  RnnModel best;
  AdamState adam;
  int next_epoch = 0;
  int best_epoch = -1;
  double best_valid = 0.0;
  std::vector<EpochRecord> log;
};

nlohmann::json to_json(const TrainCheckpoint& c);
TrainCheckpoint checkpoint_from_json(const nlohmann::json& j);

struct TrainResult {
  RnnModel best;
  int best_epoch = -1;
  double best_valid = 0.0;
  std::vector<EpochRecord> log;
  TrainCheckpoint final_state;
};

/// Mean / sd of the x inputs and r_hat targets.
NormStats estimate_norm_stats(const ResidualDataset& ds);

using EpochCallback = std::function<void(const EpochRecord&, const TrainCheckpoint&)>;

/// Maximum-likelihood training by truncated BPTT and Adam. Each epoch
/// shuffles the non-overlapping seq_len windows of `train`, steps Adam once
/// per batch of windows (hidden state reset per window), then scores every
/// seq_len window of `valid`. The parameters with the lowest validation
/// loss are returned. Throws NumericalError on a non-finite loss (the
/// callback has seen every completed epoch by then).
TrainResult train_rnn(const RnnModel& init, const ResidualDataset& train,
                      const ResidualDataset& valid, const TrainConfig& cfg,
                      const EpochCallback& on_epoch = {}, const TrainCheckpoint* resume = nullptr);

}  // namespace l96sp
