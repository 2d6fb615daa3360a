// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "irsmba/mba/model.hpp"
#include "irsmba/tensor/optim.hpp"

namespace irsmba::mba {

/// Paired real tensors [D, 2, N_t, M]: network input and target channel.
struct Dataset {
  Tensor inputs;
  Tensor targets;

  std::size_t size() const { return inputs.empty() ? 0 : inputs.dim(0); }
  void validate() const;
};

enum class Stage { can, cmn };
std::string to_string(Stage s);

struct TrainConfig {
  std::size_t epochs = 400;
  std::size_t batch_size = 64;
  tensor::AdamConfig adam;
  tensor::LrSchedule schedule;
  std::uint64_t seed = 0;
};

TrainConfig default_train_config(Stage s);

struct LossRecord {
  std::size_t epoch = 0;  // 1-based
  Stage stage = Stage::can;
  double train_loss = 0.0;
  double val_nmse = 0.0;
};

using EpochCallback = std::function<void(const LossRecord&)>;

/// Trains one stage in place.
///
/// CAN minimises (1/2B) sum ||target - CAN(input)||^2 per minibatch. CMN sees
/// the frozen CAN outputs as its inputs and requires a trained CAN. Throws
/// PreconditionError if CMN is requested first and NonFiniteError (with epoch
/// and step) if the loss or a gradient becomes non-finite.
std::vector<LossRecord> train_stage(MbaModel& model, Stage stage, const Dataset& train, const Dataset& val,
                                    const TrainConfig& config, const EpochCallback& on_epoch = {});

/// Mean per-sample NMSE between two [D, 2, N_t, M] tensors.
double tensor_nmse(const Tensor& truth, const Tensor& estimate);

/// CSV with header `epoch,stage,train_loss,val_nmse`.
void write_loss_trace(const std::vector<LossRecord>& trace, const std::filesystem::path& path);

}  // namespace irsmba::mba
