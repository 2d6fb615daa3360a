// SPDX-License-Identifier: Apache-2.0
#include "irsmba/mba/layers.hpp"

#include <cmath>

#include "irsmba/error.hpp"

namespace irsmba::mba {

Conv2d::Conv2d(const std::string& name, std::size_t c_in, std::size_t c_out, std::size_t kernel, Rng& rng)
    : weight(name + ".weight", Tensor({c_out, c_in, kernel, kernel})), bias(name + ".bias", Tensor({c_out})) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(c_in * kernel * kernel));
  std::uniform_real_distribution<double> u(-bound, bound);
  for (double& w : weight.value.data()) w = u(rng);
  for (double& b : bias.value.data()) b = u(rng);
}

Var Conv2d::operator()(Graph& g, Var x) { return tensor::conv2d(x, g.leaf(weight.value), g.leaf(bias.value)); }

void Conv2d::zero() {
  weight.value.fill(0.0);
  bias.value.fill(0.0);
}

void Conv2d::collect(ParamRegistry& reg) {
  reg.params.push_back(&weight);
  reg.params.push_back(&bias);
}

BatchNorm::BatchNorm(const std::string& n, std::size_t channels)
    : gamma(n + ".gamma", Tensor({channels}, 1.0)), beta(n + ".beta", Tensor({channels}, 0.0)), state(channels), name(n) {}

Var BatchNorm::operator()(Graph& g, Var x, bool train) {
  return tensor::batchnorm(x, g.leaf(gamma.value), g.leaf(beta.value), state,
                           train ? tensor::BnMode::train : tensor::BnMode::eval);
}

void BatchNorm::collect(ParamRegistry& reg) {
  reg.params.push_back(&gamma);
  reg.params.push_back(&beta);
  reg.bn_states.emplace_back(name, &state);
}

PRelu::PRelu(const std::string& name, double init) : slope(name + ".slope", Tensor({1}, init)) {}

Var PRelu::operator()(Graph& g, Var x) { return tensor::prelu(x, g.leaf(slope.value)); }

void PRelu::collect(ParamRegistry& reg) { reg.params.push_back(&slope); }

MultiConvBlock::MultiConvBlock(const std::string& name, std::size_t c_in, std::size_t d, Rng& rng)
    : first(name + ".0", c_in, d, 1, rng), second(name + ".1", d, d, 1, rng) {}

Var MultiConvBlock::operator()(Graph& g, Var x) { return second(g, tensor::relu(first(g, x))); }

void MultiConvBlock::collect(ParamRegistry& reg) {
  first.collect(reg);
  second.collect(reg);
}

Var axial_attention(Var q, Var k, Var v) {
  const auto& qd = q.dims();
  if (qd.size() != 4) throw DimensionError("axial_attention: expected [N, d, N_t, M], got " + tensor::shape_str(qd));
  if (k.dims() != qd || v.dims() != qd) throw DimensionError("axial_attention: q, k, v dims differ");
  const std::size_t d = qd[1];
  if (d == 0) throw PreconditionError("axial_attention: width d must be positive");
  const std::vector<std::size_t> to_rows{0, 2, 3, 1};
  const std::vector<std::size_t> back{0, 3, 1, 2};
  Var qr = tensor::permute(q, to_rows);  // [N, N_t, M, d]
  Var kr = tensor::permute(k, to_rows);
  Var vr = tensor::permute(v, to_rows);
  Var logits = tensor::scale(tensor::bmm(qr, kr, true), 1.0 / std::sqrt(static_cast<double>(d)));  // [N, N_t, M, M]
  Var weights = tensor::softmax(logits, 3);
  Var out = tensor::bmm(weights, vr);  // [N, N_t, M, d]
  return tensor::permute(out, back);
}

AttentionBlock::AttentionBlock(const std::string& name, std::size_t channels, std::size_t d, Rng& rng)
    : query(name + ".q", channels, d, rng),
      key(name + ".k", channels, d, rng),
      value(name + ".v", channels, d, rng),
      post(name + ".post", d, channels, 3, rng) {}

Var AttentionBlock::attention(Graph& g, Var x) { return axial_attention(query(g, x), key(g, x), value(g, x)); }

Var AttentionBlock::operator()(Graph& g, Var x) { return tensor::add(x, post(g, attention(g, x))); }

void AttentionBlock::collect(ParamRegistry& reg) {
  query.collect(reg);
  key.collect(reg);
  value.collect(reg);
  post.collect(reg);
}

ConvBlock::ConvBlock(const std::string& name, std::size_t channels, Rng& rng)
    : conv1(name + ".conv1", channels, channels, 3, rng),
      bn1(name + ".bn1", channels),
      act(name + ".act"),
      conv2(name + ".conv2", channels, channels, 3, rng),
      bn2(name + ".bn2", channels) {}

Var ConvBlock::operator()(Graph& g, Var x, bool train) {
  Var h = act(g, bn1(g, conv1(g, x), train));
  return tensor::add(bn2(g, conv2(g, h), train), x);
}

void ConvBlock::collect(ParamRegistry& reg) {
  conv1.collect(reg);
  bn1.collect(reg);
  act.collect(reg);
  conv2.collect(reg);
  bn2.collect(reg);
}

}  // namespace irsmba::mba
