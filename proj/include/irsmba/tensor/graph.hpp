// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "irsmba/tensor/tensor.hpp"

namespace irsmba::tensor {

class Graph;

/// Handle to a node recorded on a Graph.
struct Var {
  Graph* graph = nullptr;
  std::size_t id = 0;

  const Tensor& value() const;
  const Shape& dims() const { return value().dims(); }
};

/// Tape for reverse-mode differentiation over a static per-batch graph.
///
/// Nodes are appended in evaluation order, so reverse id order is a valid
/// topological order for the backward sweep. Recorded values are never
/// mutated after the node is created.
class Graph {
 public:
  /// Receives the node itself and the gradient of its output; scatters into parents.
  using BackwardFn = std::function<void(Graph&, Var self, const std::vector<double>& out_grad)>;

  explicit Graph(bool recording = true) : recording_(recording) {}
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  /// False in inference mode: ops skip saving closures and intermediates.
  bool recording() const { return recording_; }

  /// Leaf that never receives gradient.
  Var constant(Tensor value);

  /// Leaf bound to an external tensor. When the tensor requires grad, backward()
  /// accumulates into its grad buffer.
  Var leaf(Tensor& source);

  /// Used by ops. `parents` are the inputs that may need gradient.
  Var record(const char* op, Tensor value, std::vector<Var> parents, BackwardFn backward);

  const Tensor& value(Var v) const { return nodes_.at(v.id).value; }
  bool needs_grad(Var v) const { return nodes_.at(v.id).needs_grad; }
  const std::string& op_name(Var v) const { return nodes_.at(v.id).op; }

  /// Mutable gradient buffer of a node, allocated zeroed on first access.
  std::vector<double>& grad_buffer(Var v);

  /// Backpropagates from a single-element node. Can be called once per graph.
  void backward(Var loss);

  /// Throws NonFiniteError naming the first op whose output holds NaN/Inf.
  void check_finite() const;

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    std::string op;
    Tensor value;
    std::vector<double> grad;
    bool needs_grad = false;
    Tensor* external = nullptr;
    BackwardFn backward;
  };

  bool recording_;
  bool backward_done_ = false;
  std::vector<Node> nodes_;
};

}  // namespace irsmba::tensor
