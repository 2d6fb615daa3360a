// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "irsmba/mba/layers.hpp"
#include "irsmba/tensor/checkpoint.hpp"

namespace irsmba::mba {

struct ModelConfig {
  std::size_t width = 32;          // trunk feature maps F
  std::size_t attention_dim = 16;  // d
  std::uint64_t seed = 0;          // initialisation
};

/// Feature-recovery network:
///   P1 = ReLU(Conv(x)); A1 = AB1(P1) + P1; P2 = ReLU(Conv(A1)); A2 = AB2(P2) + P2
///   out = x - ReLU(Conv(A2))
struct Can {
  Conv2d conv_in;
  AttentionBlock ab1;
  Conv2d conv_mid;
  AttentionBlock ab2;
  Conv2d conv_out;

  Can() = default;
  Can(const ModelConfig& config, Rng& rng);

  Var operator()(Graph& g, Var x);
  void collect(ParamRegistry& reg);
};

/// Denoising network:
///   out = Conv(BN(Conv(CB2(CB1(PReLU(Conv(x))))))) + Conv1x1(x)
struct Cmn {
  Conv2d conv_in;
  PRelu act;
  ConvBlock cb1;
  ConvBlock cb2;
  Conv2d conv_a;
  BatchNorm bn;
  Conv2d conv_out;
  Conv2d skip;

  Cmn() = default;
  Cmn(const ModelConfig& config, Rng& rng);

  Var operator()(Graph& g, Var x, bool train);
  void collect(ParamRegistry& reg);
};

/// CAN followed by CMN. Each network can be frozen independently.
class MbaModel {
 public:
  explicit MbaModel(const ModelConfig& config = {});
  MbaModel(const MbaModel&) = delete;
  MbaModel& operator=(const MbaModel&) = delete;

  const ModelConfig& config() const { return config_; }

  Can& can() { return can_; }
  Cmn& cmn() { return cmn_; }

  std::vector<Parameter*> can_parameters();
  std::vector<Parameter*> cmn_parameters();

  Var forward_can(Graph& g, Var x) { return can_(g, x); }
  Var forward_cmn(Graph& g, Var x, bool train) { return cmn_(g, x, train); }
  Var forward(Graph& g, Var x, bool train) { return cmn_(g, can_(g, x), train); }

  /// Inference helpers on [N, 2, N_t, M] batches; no tape is kept.
  Tensor predict_can(const Tensor& x);
  Tensor predict_cmn(const Tensor& x);
  Tensor predict(const Tensor& x);

  bool can_trained = false;
  bool cmn_trained = false;

  /// Parameters, batch-norm running statistics and training flags.
  std::vector<tensor::NamedTensor> state_dict();
  /// Throws IoError if a blob is missing or has the wrong shape.
  void load_state_dict(const std::vector<tensor::NamedTensor>& blobs);

  void save(const std::filesystem::path& path) { tensor::save_checkpoint(path, state_dict()); }
  void load(const std::filesystem::path& path) { load_state_dict(tensor::load_checkpoint(path)); }

 private:
  ModelConfig config_;
  Can can_;
  Cmn cmn_;
};

}  // namespace irsmba::mba
