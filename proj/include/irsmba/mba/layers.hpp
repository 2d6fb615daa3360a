// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "irsmba/random.hpp"
#include "irsmba/tensor/graph.hpp"
#include "irsmba/tensor/ops.hpp"
#include "irsmba/tensor/optim.hpp"

namespace irsmba::mba {

using tensor::Graph;
using tensor::Parameter;
using tensor::Tensor;
using tensor::Var;

/// Collects trainable tensors and batch-norm states under hierarchical names.
struct ParamRegistry {
  std::vector<Parameter*> params;
  std::vector<std::pair<std::string, tensor::BatchNormState*>> bn_states;
};

struct Conv2d {
  Parameter weight;  // [C_out, C_in, S, S]
  Parameter bias;    // [C_out]

  Conv2d() = default;
  Conv2d(const std::string& name, std::size_t c_in, std::size_t c_out, std::size_t kernel, Rng& rng);

  Var operator()(Graph& g, Var x);
  void zero();
  void collect(ParamRegistry& reg);
};

struct BatchNorm {
  Parameter gamma;
  Parameter beta;
  tensor::BatchNormState state;
  std::string name;

  BatchNorm() = default;
  BatchNorm(const std::string& name, std::size_t channels);

  Var operator()(Graph& g, Var x, bool train);
  void collect(ParamRegistry& reg);
};

struct PRelu {
  Parameter slope;  // [1]

  PRelu() = default;
  explicit PRelu(const std::string& name, double init = 0.25);

  Var operator()(Graph& g, Var x);
  void collect(ParamRegistry& reg);
};

/// Multi-convolutional projection: 1x1 conv, ReLU, 1x1 conv.
struct MultiConvBlock {
  Conv2d first;
  Conv2d second;

  MultiConvBlock() = default;
  MultiConvBlock(const std::string& name, std::size_t c_in, std::size_t d, Rng& rng);

  Var operator()(Graph& g, Var x);
  void collect(ParamRegistry& reg);
};

/// Self-attention along the last (IRS element) axis, independently for every
/// batch item and every BS-antenna row. q, k, v: [N, d, N_t, M].
Var axial_attention(Var q, Var k, Var v);

/// x + Conv3x3(Attention(MB_q(x), MB_k(x), MB_v(x))).
struct AttentionBlock {
  MultiConvBlock query;
  MultiConvBlock key;
  MultiConvBlock value;
  Conv2d post;

  AttentionBlock() = default;
  AttentionBlock(const std::string& name, std::size_t channels, std::size_t d, Rng& rng);

  Var attention(Graph& g, Var x);
  Var operator()(Graph& g, Var x);
  void collect(ParamRegistry& reg);
};

/// BN(Conv(PReLU(BN(Conv(x))))) + x.
struct ConvBlock {
  Conv2d conv1;
  BatchNorm bn1;
  PRelu act;
  Conv2d conv2;
  BatchNorm bn2;

  ConvBlock() = default;
  ConvBlock(const std::string& name, std::size_t channels, Rng& rng);

  Var operator()(Graph& g, Var x, bool train);
  void collect(ParamRegistry& reg);
};

}  // namespace irsmba::mba
