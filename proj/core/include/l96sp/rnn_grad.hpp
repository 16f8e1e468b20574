#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "l96sp/residuals.hpp"
#include "l96sp/rnn_model.hpp"

namespace l96sp {

/// A run of consecutive dataset rows inside one segment. Each window holds
/// K independent scalar sequences (one per gridpoint), each starting from
/// a zero hidden state.
struct Window {
  std::size_t row = 0;
  std::size_t length = 0;
};

/// Non-overlapping windows of exactly seq_len rows that never cross a
/// segment boundary; trailing partial windows are dropped.
std::vector<Window> make_windows(const ResidualDataset& ds, std::size_t seq_len);

/// Mean negative log-likelihood per (sequence, step) term over the windows,
/// including the +log(dt) Jacobian, i.e. minus the normalized
/// log-likelihood.
double rnn_loss(const RnnModel& m, const ResidualDataset& ds, std::span<const Window> windows);

struct LossGrad {
  double loss = 0.0;
  std::vector<double> grad;  // same layout as RnnModel::params()
};

/// Loss and its exact gradient by backpropagation through time over every
/// window (g, both GRU layers, b and log sigma).
LossGrad rnn_grad(const RnnModel& m, const ResidualDataset& ds, std::span<const Window> windows);

}  // namespace l96sp
