// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <span>
#include <vector>

#include "irsmba/tensor/graph.hpp"
#include "irsmba/tensor/tensor.hpp"

namespace irsmba::tensor {

/// Maps leaves (one per checked tensor, same order) to a single-element loss.
using LossFn = std::function<Var(Graph&, std::span<const Var>)>;

/// Largest relative discrepancy between the tape gradient and a central
/// difference, over every element of every tensor in `inputs`:
///   |analytic - numeric| / max(|analytic|, |numeric|, 1e-12).
///
/// The computation must be deterministic. Tensors are perturbed in place and
/// restored before returning. Throws PreconditionError for empty tensors or
/// epsilon outside [1e-7, 1e-4], NonFiniteError naming the op that produced a
/// non-finite intermediate.
double grad_check(const LossFn& computation, std::span<Tensor* const> inputs, double epsilon = 1e-6);

/// Single-input convenience form.
double grad_check(const std::function<Var(Graph&, Var)>& computation, const Tensor& input, double epsilon = 1e-6);

}  // namespace irsmba::tensor
