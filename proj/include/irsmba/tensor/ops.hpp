// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

#include "irsmba/tensor/graph.hpp"
#include "irsmba/tensor/tensor.hpp"

namespace irsmba::tensor {

// Elementwise arithmetic. Operands must have identical dims.
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
Var scale(Var a, double s);

Var relu(Var x);
/// `slope` is a single-element tensor: y = x for x >= 0, slope * x otherwise.
Var prelu(Var x, Var slope);
/// Numerically stabilised softmax along `axis`.
Var softmax(Var x, std::size_t axis);

/// Stride-1 convolution with zero "same" padding of (S-1)/2.
///
/// x: [N, C_in, H, W] (or [C_in, H, W]); kernels: [C_out, C_in, S, S] with S odd;
/// bias: [C_out]. Output keeps the spatial dims of x.
Var conv2d(Var x, Var kernels, Var bias);

enum class BnMode { train, eval };

/// Running statistics owned by a batch-norm layer.
struct BatchNormState {
  Tensor running_mean;
  Tensor running_var;
  double momentum = 0.1;
  double epsilon = 1e-5;

  explicit BatchNormState(std::size_t channels = 1)
      : running_mean({channels}, 0.0), running_var({channels}, 1.0) {}
};

/// Per-channel batch normalisation of x: [N, C, H, W].
///
/// Train mode normalises with batch statistics (biased variance) and, when
/// `update_running` is set, folds them into `state` with its momentum (unbiased
/// variance, as the usual frameworks do). Eval mode uses the running statistics.
Var batchnorm(Var x, Var gamma, Var beta, BatchNormState& state, BnMode mode, bool update_running = true);

/// Axis permutation; out.dims[i] = x.dims[perm[i]].
Var permute(Var x, const std::vector<std::size_t>& perm);
Var reshape(Var x, Shape dims);

/// Batched matmul over all leading axes: [..., m, k] x [..., k, n] -> [..., m, n].
/// With `transpose_b`, b is [..., n, k].
Var bmm(Var a, Var b, bool transpose_b = false);

/// Sum of all elements -> [1].
Var sum(Var x);
/// sum(x * weights) -> [1]; weights is a constant with x's dims.
Var weighted_sum(Var x, const Tensor& weights);
/// factor * sum((pred - target)^2) -> [1].
Var squared_error(Var pred, const Tensor& target, double factor);

}  // namespace irsmba::tensor
