// SPDX-License-Identifier: Apache-2.0
#include "irsmba/mba/model.hpp"

#include <algorithm>
#include <map>

#include "irsmba/error.hpp"

namespace irsmba::mba {

namespace {

constexpr std::size_t kPredictChunk = 256;

Tensor slice_batch(const Tensor& x, std::size_t begin, std::size_t end) {
  tensor::Shape d = x.dims();
  const std::size_t per = x.size() / d[0];
  d[0] = end - begin;
  std::vector<double> data(x.storage().begin() + static_cast<std::ptrdiff_t>(begin * per),
                           x.storage().begin() + static_cast<std::ptrdiff_t>(end * per));
  return Tensor(d, std::move(data));
}

template <typename Fn>
Tensor chunked(const Tensor& x, Fn&& fn) {
  if (x.ndim() != 4 || x.dim(1) != 2) {
    throw DimensionError("model input must be [N, 2, N_t, M], got " + tensor::shape_str(x.dims()));
  }
  Tensor out(x.dims());
  const std::size_t n = x.dim(0);
  const std::size_t per = x.size() / n;
  for (std::size_t b = 0; b < n; b += kPredictChunk) {
    const std::size_t e = std::min(n, b + kPredictChunk);
    Graph g(false);
    Var v = fn(g, g.constant(slice_batch(x, b, e)));
    std::copy(v.value().storage().begin(), v.value().storage().end(), out.storage().begin() + static_cast<std::ptrdiff_t>(b * per));
  }
  return out;
}

}  // namespace

Can::Can(const ModelConfig& c, Rng& rng)
    : conv_in("can.conv_in", 2, c.width, 3, rng),
      ab1("can.ab1", c.width, c.attention_dim, rng),
      conv_mid("can.conv_mid", c.width, c.width, 3, rng),
      ab2("can.ab2", c.width, c.attention_dim, rng),
      conv_out("can.conv_out", c.width, 2, 3, rng) {}

Var Can::operator()(Graph& g, Var x) {
  Var p1 = tensor::relu(conv_in(g, x));
  Var a1 = tensor::add(ab1(g, p1), p1);
  Var p2 = tensor::relu(conv_mid(g, a1));
  Var a2 = tensor::add(ab2(g, p2), p2);
  return tensor::sub(x, tensor::relu(conv_out(g, a2)));
}

void Can::collect(ParamRegistry& reg) {
  conv_in.collect(reg);
  ab1.collect(reg);
  conv_mid.collect(reg);
  ab2.collect(reg);
  conv_out.collect(reg);
}

Cmn::Cmn(const ModelConfig& c, Rng& rng)
    : conv_in("cmn.conv_in", 2, c.width, 3, rng),
      act("cmn.act"),
      cb1("cmn.cb1", c.width, rng),
      cb2("cmn.cb2", c.width, rng),
      conv_a("cmn.conv_a", c.width, c.width, 3, rng),
      bn("cmn.bn", c.width),
      conv_out("cmn.conv_out", c.width, 2, 3, rng),
      skip("cmn.skip", 2, 2, 1, rng) {}

Var Cmn::operator()(Graph& g, Var x, bool train) {
  Var h = act(g, conv_in(g, x));
  h = cb2(g, cb1(g, h, train), train);
  h = conv_out(g, bn(g, conv_a(g, h), train));
  return tensor::add(h, skip(g, x));
}

void Cmn::collect(ParamRegistry& reg) {
  conv_in.collect(reg);
  act.collect(reg);
  cb1.collect(reg);
  cb2.collect(reg);
  conv_a.collect(reg);
  bn.collect(reg);
  conv_out.collect(reg);
  skip.collect(reg);
}

MbaModel::MbaModel(const ModelConfig& config) : config_(config) {
  if (config.width == 0 || config.attention_dim == 0) throw PreconditionError("model widths must be positive");
  Rng can_rng(derive_seed(config.seed, stream::init, 0));
  Rng cmn_rng(derive_seed(config.seed, stream::init, 1));
  can_ = Can(config, can_rng);
  cmn_ = Cmn(config, cmn_rng);
}

std::vector<Parameter*> MbaModel::can_parameters() {
  ParamRegistry reg;
  can_.collect(reg);
  return reg.params;
}

std::vector<Parameter*> MbaModel::cmn_parameters() {
  ParamRegistry reg;
  cmn_.collect(reg);
  return reg.params;
}

Tensor MbaModel::predict_can(const Tensor& x) {
  return chunked(x, [this](Graph& g, Var v) { return can_(g, v); });
}

Tensor MbaModel::predict_cmn(const Tensor& x) {
  return chunked(x, [this](Graph& g, Var v) { return cmn_(g, v, false); });
}

Tensor MbaModel::predict(const Tensor& x) {
  return chunked(x, [this](Graph& g, Var v) { return cmn_(g, can_(g, v), false); });
}

std::vector<tensor::NamedTensor> MbaModel::state_dict() {
  ParamRegistry reg;
  can_.collect(reg);
  cmn_.collect(reg);
  std::vector<tensor::NamedTensor> out;
  for (Parameter* p : reg.params) out.push_back({p->name, Tensor(p->value.dims(), p->value.storage())});
  for (auto& [name, st] : reg.bn_states) {
    out.push_back({name + ".running_mean", st->running_mean});
    out.push_back({name + ".running_var", st->running_var});
  }
  out.push_back({"meta.widths", Tensor({2}, {static_cast<double>(config_.width), static_cast<double>(config_.attention_dim)})});
  out.push_back({"meta.trained", Tensor({2}, {can_trained ? 1.0 : 0.0, cmn_trained ? 1.0 : 0.0})});
  return out;
}

void MbaModel::load_state_dict(const std::vector<tensor::NamedTensor>& blobs) {
  std::map<std::string, const Tensor*> by_name;
  for (const auto& b : blobs) by_name[b.name] = &b.tensor;
  auto fetch = [&](const std::string& name, const tensor::Shape& dims) -> const Tensor& {
    auto it = by_name.find(name);
    if (it == by_name.end()) throw IoError("checkpoint is missing tensor '" + name + "'");
    if (it->second->dims() != dims) {
      throw IoError("checkpoint tensor '" + name + "' has shape " + tensor::shape_str(it->second->dims()) +
                    ", model expects " + tensor::shape_str(dims));
    }
    return *it->second;
  };
  const Tensor& widths = fetch("meta.widths", {2});
  if (widths[0] != static_cast<double>(config_.width) || widths[1] != static_cast<double>(config_.attention_dim)) {
    throw IoError("checkpoint widths do not match the model configuration");
  }
  ParamRegistry reg;
  can_.collect(reg);
  cmn_.collect(reg);
  for (Parameter* p : reg.params) {
    const Tensor& t = fetch(p->name, p->value.dims());
    std::copy(t.storage().begin(), t.storage().end(), p->value.storage().begin());
  }
  for (auto& [name, st] : reg.bn_states) {
    st->running_mean = fetch(name + ".running_mean", st->running_mean.dims());
    st->running_var = fetch(name + ".running_var", st->running_var.dims());
  }
  const Tensor& flags = fetch("meta.trained", {2});
  can_trained = flags[0] != 0.0;
  cmn_trained = flags[1] != 0.0;
}

}  // namespace irsmba::mba
