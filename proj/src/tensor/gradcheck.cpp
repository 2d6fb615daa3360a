// SPDX-License-Identifier: Apache-2.0
#include "irsmba/tensor/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "irsmba/error.hpp"

namespace irsmba::tensor {
namespace {

double evaluate(const LossFn& fn, std::span<Tensor* const> inputs) {
  Graph g(false);
  std::vector<Var> leaves;
  leaves.reserve(inputs.size());
  for (Tensor* t : inputs) leaves.push_back(g.leaf(*t));
  Var loss = fn(g, leaves);
  g.check_finite();
  if (loss.value().size() != 1) throw DimensionError("grad_check: computation must return a single element");
  return loss.value()[0];
}

}  // namespace

double grad_check(const LossFn& computation, std::span<Tensor* const> inputs, double epsilon) {
  if (!(epsilon >= 1e-7 && epsilon <= 1e-4)) throw PreconditionError("grad_check: epsilon must lie in [1e-7, 1e-4]");
  if (inputs.empty()) throw PreconditionError("grad_check: no tensors to check");
  for (const Tensor* t : inputs) {
    if (t->empty()) throw PreconditionError("grad_check: zero-size tensor");
  }

  std::vector<bool> saved_flags;
  for (Tensor* t : inputs) {
    saved_flags.push_back(t->requires_grad());
    t->set_requires_grad(true);
    t->zero_grad();
  }
  {
    Graph g;
    std::vector<Var> leaves;
    for (Tensor* t : inputs) leaves.push_back(g.leaf(*t));
    Var loss = computation(g, leaves);
    g.check_finite();
    g.backward(loss);
  }

  double worst = 0.0;
  for (Tensor* t : inputs) {
    const std::vector<double> analytic(t->grad().begin(), t->grad().end());
    for (std::size_t i = 0; i < t->size(); ++i) {
      const double orig = (*t)[i];
      (*t)[i] = orig + epsilon;
      const double up = evaluate(computation, inputs);
      (*t)[i] = orig - epsilon;
      const double down = evaluate(computation, inputs);
      (*t)[i] = orig;
      const double numeric = (up - down) / (2.0 * epsilon);
      const double denom = std::max({std::abs(analytic[i]), std::abs(numeric), 1e-12});
      worst = std::max(worst, std::abs(analytic[i] - numeric) / denom);
    }
  }
  for (std::size_t k = 0; k < inputs.size(); ++k) inputs[k]->set_requires_grad(saved_flags[k]);
  return worst;
}

double grad_check(const std::function<Var(Graph&, Var)>& computation, const Tensor& input, double epsilon) {
  Tensor copy = input;
  Tensor* ptr = &copy;
  return grad_check([&](Graph& g, std::span<const Var> leaves) { return computation(g, leaves[0]); },
                    std::span<Tensor* const>(&ptr, 1), epsilon);
}

}  // namespace irsmba::tensor
