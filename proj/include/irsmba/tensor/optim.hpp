// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "irsmba/tensor/tensor.hpp"

namespace irsmba::tensor {

/// Trainable tensor with a stable name (used for checkpoints and diagnostics).
struct Parameter {
  std::string name;
  Tensor value;

  Parameter() = default;
  Parameter(std::string n, Tensor v) : name(std::move(n)), value(std::move(v)) { value.set_requires_grad(true); }
};

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Moment buffers and step count for one set of parameters.
struct AdamState {
  AdamConfig config;
  std::vector<std::vector<double>> first_moment;
  std::vector<std::vector<double>> second_moment;
  std::uint64_t step_count = 0;
};

/// Adam with bias-corrected moments.
class Adam {
 public:
  Adam(std::vector<Parameter*> params, AdamConfig config);

  /// One update from the gradients currently stored on the parameters.
  /// Throws NonFiniteError naming the parameter if a gradient holds NaN/Inf;
  /// no parameter is modified in that case.
  void step();
  void zero_grad();

  void set_learning_rate(double lr);
  double learning_rate() const { return state_.config.learning_rate; }
  const AdamState& state() const { return state_; }

 private:
  std::vector<Parameter*> params_;
  AdamState state_;
};

/// Stepped (or constant) learning-rate schedule indexed by 0-based epoch.
struct LrSchedule {
  enum class Mode { stepped, constant };

  double initial_rate = 2e-4;
  double decay_factor = 0.6;
  std::size_t decay_interval_epochs = 150;
  Mode mode = Mode::stepped;

  static LrSchedule constant(double rate) { return {rate, 1.0, 1, Mode::constant}; }

  void validate() const;
  double rate_at(std::size_t epoch) const;
};

}  // namespace irsmba::tensor
