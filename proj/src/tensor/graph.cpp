// SPDX-License-Identifier: Apache-2.0
#include "irsmba/tensor/graph.hpp"

#include <algorithm>
#include <cmath>

#include "irsmba/error.hpp"

namespace irsmba::tensor {

const Tensor& Var::value() const { return graph->value(*this); }

Var Graph::constant(Tensor value) {
  Node n;
  n.op = "constant";
  n.value = std::move(value);
  nodes_.push_back(std::move(n));
  return Var{this, nodes_.size() - 1};
}

Var Graph::leaf(Tensor& source) {
  Node n;
  n.op = "leaf";
  n.value = Tensor(source.dims(), source.storage());
  n.needs_grad = recording_ && source.requires_grad();
  n.external = n.needs_grad ? &source : nullptr;
  nodes_.push_back(std::move(n));
  return Var{this, nodes_.size() - 1};
}

Var Graph::record(const char* op, Tensor value, std::vector<Var> parents, BackwardFn backward) {
  Node n;
  n.op = op;
  n.value = std::move(value);
  if (recording_) {
    n.needs_grad = std::any_of(parents.begin(), parents.end(),
                               [this](Var p) { return nodes_.at(p.id).needs_grad; });
    if (n.needs_grad) n.backward = std::move(backward);
  }
  nodes_.push_back(std::move(n));
  return Var{this, nodes_.size() - 1};
}

std::vector<double>& Graph::grad_buffer(Var v) {
  Node& n = nodes_.at(v.id);
  if (n.grad.size() != n.value.size()) n.grad.assign(n.value.size(), 0.0);
  return n.grad;
}

void Graph::backward(Var loss) {
  if (!recording_) throw PreconditionError("backward() on a non-recording graph");
  if (backward_done_) throw PreconditionError("backward() already ran on this graph");
  if (value(loss).size() != 1) {
    throw DimensionError("backward() needs a single-element loss, got " + shape_str(value(loss).dims()));
  }
  backward_done_ = true;
  if (!nodes_[loss.id].needs_grad) return;
  grad_buffer(loss)[0] = 1.0;
  for (std::size_t i = loss.id + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (!n.needs_grad || n.grad.empty()) continue;
    if (n.backward) {
      n.backward(*this, Var{this, i}, n.grad);
      n.backward = nullptr;
    }
    if (n.external) {
      auto g = n.external->grad();
      for (std::size_t k = 0; k < g.size(); ++k) g[k] += n.grad[k];
    }
  }
}

void Graph::check_finite() const {
  for (const Node& n : nodes_) {
    for (double x : n.value.data()) {
      if (!std::isfinite(x)) throw NonFiniteError("non-finite value produced by op '" + n.op + "'");
    }
  }
}

}  // namespace irsmba::tensor
