// SPDX-License-Identifier: Apache-2.0
#include "irsmba/mba/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "irsmba/error.hpp"

namespace irsmba::mba {

namespace {

Tensor gather(const Tensor& x, const std::vector<std::size_t>& order, std::size_t begin, std::size_t end) {
  tensor::Shape d = x.dims();
  const std::size_t per = x.size() / d[0];
  d[0] = end - begin;
  Tensor out(d);
  for (std::size_t i = begin; i < end; ++i) {
    const auto src = x.storage().begin() + static_cast<std::ptrdiff_t>(order[i] * per);
    std::copy(src, src + static_cast<std::ptrdiff_t>(per), out.storage().begin() + static_cast<std::ptrdiff_t>((i - begin) * per));
  }
  return out;
}

}  // namespace

void Dataset::validate() const {
  if (inputs.ndim() != 4 || inputs.dim(1) != 2) {
    throw DimensionError("dataset inputs must be [D, 2, N_t, M], got " + tensor::shape_str(inputs.dims()));
  }
  if (targets.dims() != inputs.dims()) throw DimensionError("dataset inputs and targets differ in shape");
}

std::string to_string(Stage s) { return s == Stage::can ? "can" : "cmn"; }

TrainConfig default_train_config(Stage s) {
  TrainConfig c;
  if (s == Stage::can) {
    c.schedule = {2e-4, 0.6, 150, tensor::LrSchedule::Mode::stepped};
  } else {
    c.schedule = tensor::LrSchedule::constant(1e-4);
  }
  c.adam.learning_rate = c.schedule.initial_rate;
  return c;
}

double tensor_nmse(const Tensor& truth, const Tensor& estimate) {
  if (truth.dims() != estimate.dims() || truth.ndim() < 2) throw DimensionError("tensor_nmse: dims differ");
  const std::size_t n = truth.dim(0);
  const std::size_t per = truth.size() / n;
  double total = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = s * per; i < (s + 1) * per; ++i) {
      const double e = truth[i] - estimate[i];
      num += e * e;
      den += truth[i] * truth[i];
    }
    if (!(den > 0.0)) throw PreconditionError("tensor_nmse: sample " + std::to_string(s) + " has zero norm");
    total += num / den;
  }
  return total / static_cast<double>(n);
}

std::vector<LossRecord> train_stage(MbaModel& model, Stage stage, const Dataset& train, const Dataset& val,
                                    const TrainConfig& config, const EpochCallback& on_epoch) {
  train.validate();
  if (val.size() > 0) val.validate();
  if (train.size() == 0) throw PreconditionError("train_stage: empty training set");
  if (config.batch_size == 0) throw PreconditionError("train_stage: batch size must be positive");
  config.schedule.validate();
  if (stage == Stage::cmn && !model.can_trained) {
    throw PreconditionError("train_stage: the CMN stage needs a trained CAN; train the CAN stage first");
  }

  // CMN learns on frozen CAN outputs, so those are computed once.
  Tensor train_in = stage == Stage::can ? train.inputs : model.predict_can(train.inputs);
  Tensor val_in;
  if (val.size() > 0) val_in = stage == Stage::can ? val.inputs : model.predict_can(val.inputs);

  std::vector<Parameter*> params = stage == Stage::can ? model.can_parameters() : model.cmn_parameters();
  tensor::AdamConfig adam_cfg = config.adam;
  adam_cfg.learning_rate = config.schedule.rate_at(0);
  tensor::Adam adam(params, adam_cfg);

  const std::size_t n = train.size();
  std::vector<std::size_t> order(n);
  std::vector<LossRecord> trace;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    adam.set_learning_rate(config.schedule.rate_at(epoch));
    std::iota(order.begin(), order.end(), 0);
    Rng rng(derive_seed(config.seed, stream::training, epoch));
    for (std::size_t i = n - 1; i > 0; --i) {
      std::uniform_int_distribution<std::size_t> pick(0, i);
      std::swap(order[i], order[pick(rng)]);
    }

    double loss_sum = 0.0;
    std::size_t step = 0;
    for (std::size_t b = 0; b < n; b += config.batch_size, ++step) {
      const std::size_t e = std::min(n, b + config.batch_size);
      const double bs = static_cast<double>(e - b);
      Tensor xb = gather(train_in, order, b, e);
      Tensor yb = gather(train.targets, order, b, e);
      Graph g;
      Var x = g.constant(std::move(xb));
      Var pred = stage == Stage::can ? model.forward_can(g, x) : model.forward_cmn(g, x, true);
      Var loss = tensor::squared_error(pred, yb, 1.0 / (2.0 * bs));
      const double lv = loss.value()[0];
      if (!std::isfinite(lv)) {
        std::ostringstream msg;
        msg << to_string(stage) << " training: non-finite loss at epoch " << epoch + 1 << ", step " << step;
        try {
          g.check_finite();
        } catch (const NonFiniteError& err) {
          msg << " (" << err.what() << ")";
        }
        throw NonFiniteError(msg.str());
      }
      adam.zero_grad();
      g.backward(loss);
      try {
        adam.step();
      } catch (const NonFiniteError& err) {
        std::ostringstream msg;
        msg << to_string(stage) << " training, epoch " << epoch + 1 << ", step " << step << ": " << err.what();
        throw NonFiniteError(msg.str());
      }
      loss_sum += lv * bs;
    }

    LossRecord rec;
    rec.epoch = epoch + 1;
    rec.stage = stage;
    rec.train_loss = loss_sum / static_cast<double>(n);
    if (val.size() > 0) {
      const Tensor out = stage == Stage::can ? model.predict_can(val_in) : model.predict_cmn(val_in);
      rec.val_nmse = tensor_nmse(val.targets, out);
    } else {
      rec.val_nmse = std::nan("");
    }
    trace.push_back(rec);
    if (on_epoch) on_epoch(rec);
  }
  if (stage == Stage::can) model.can_trained = true;
  else model.cmn_trained = true;
  return trace;
}

void write_loss_trace(const std::vector<LossRecord>& trace, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f << "epoch,stage,train_loss,val_nmse\n";
  char buf[64];
  for (const auto& r : trace) {
    f << r.epoch << "," << to_string(r.stage) << ",";
    std::snprintf(buf, sizeof buf, "%.16e", r.train_loss);
    f << buf << ",";
    std::snprintf(buf, sizeof buf, "%.16e", r.val_nmse);
    f << buf << "\n";
  }
  if (!f) throw IoError("write failed: " + path.string());
}

}  // namespace irsmba::mba
