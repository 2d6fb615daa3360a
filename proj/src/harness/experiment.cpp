// SPDX-License-Identifier: Apache-2.0
#include "irsmba/harness/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#include "irsmba/error.hpp"

namespace irsmba::harness {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) { return std::chrono::duration<double, std::milli>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

void append_rows(std::vector<ResultRow>& rows, const ExperimentConfig& c, double snr, const Evaluation& e) {
  const auto& s = c.system;
  const mba::FlopBreakdown f = mba::flop_estimate(c.model, s.n_t, s.m(), s.n_subcarriers);
  const double ls_flops = mba::ls_flop_estimate(s.n_t, c.b, s.n_subcarriers);
  rows.push_back({"ls_aug", c.b, snr, e.nmse_ls, c.timing ? e.ms_ls : 0.0, ls_flops});
  rows.push_back({"can", c.b, snr, e.nmse_can, c.timing ? e.ms_can : 0.0, f.can_total()});
  rows.push_back({"mba", c.b, snr, e.nmse_mba, c.timing ? e.ms_mba : 0.0, f.mba_total()});
}

/// Trains (and saves) or loads the model for one sweep point.
std::unique_ptr<mba::MbaModel> obtain_model(const ExperimentConfig& c, const PilotSetup& setup,
                                            const std::filesystem::path& ckpt, const SweepOptions& opt) {
  if (!opt.train) {
    if (!std::filesystem::exists(ckpt)) {
      throw IoError("missing checkpoint " + ckpt.string() + " (run `train` first or pass --train)");
    }
    auto model = std::make_unique<mba::MbaModel>(c.model);
    model->load(ckpt);
    if (!model->can_trained || !model->cmn_trained) throw IoError("checkpoint " + ckpt.string() + " is not fully trained");
    return model;
  }
  const SplitDataset data = build_dataset(c, setup);
  TrainedModel tm = train_model(c, data, opt.log);
  std::filesystem::create_directories(ckpt.parent_path());
  tm.model->save(ckpt);
  return std::move(tm.model);
}

}  // namespace

TrainedModel train_model(const ExperimentConfig& config, const SplitDataset& data, const LogFn& log) {
  TrainedModel out;
  mba::ModelConfig mc = config.model;
  mc.seed = derive_seed(config.seed, stream::init, 0);
  out.model = std::make_unique<mba::MbaModel>(mc);
  auto report = [&log](const mba::LossRecord& r) {
    if (log && (r.epoch == 1 || r.epoch % 10 == 0)) {
      log(mba::to_string(r.stage) + " epoch " + std::to_string(r.epoch) + " loss " + fmt("%.6g", r.train_loss) +
          " val_nmse " + fmt("%.6g", r.val_nmse));
    }
  };
  for (mba::Stage s : {mba::Stage::can, mba::Stage::cmn}) {
    auto trace = mba::train_stage(*out.model, s, data.train, data.val, config.train_config(s), report);
    out.trace.insert(out.trace.end(), trace.begin(), trace.end());
  }
  return out;
}

Evaluation evaluate(mba::MbaModel& model, const mba::Dataset& test, bool timing) {
  test.validate();
  Evaluation e;
  e.nmse_ls = mba::tensor_nmse(test.targets, test.inputs);
  auto t0 = Clock::now();
  const tensor::Tensor can_out = model.predict_can(test.inputs);
  if (timing) e.ms_can = ms_since(t0);
  t0 = Clock::now();
  const tensor::Tensor mba_out = model.predict(test.inputs);
  if (timing) e.ms_mba = ms_since(t0);
  e.nmse_can = mba::tensor_nmse(test.targets, can_out);
  e.nmse_mba = mba::tensor_nmse(test.targets, mba_out);
  return e;
}

SampleSet evaluation_set(const ExperimentConfig& config, const PilotSetup& setup, double snr_db) {
  return generate_samples(config, setup, {snr_db}, config.test_samples, kEvalIndexBase);
}

SweepAxis parse_axis(const std::string& name) {
  if (name == "snr") return SweepAxis::snr;
  if (name == "pilots") return SweepAxis::pilots;
  if (name == "irs_size") return SweepAxis::irs_size;
  if (name == "pattern") return SweepAxis::pattern;
  throw ConfigError("unknown sweep axis '" + name + "' (expected snr, pilots, irs_size or pattern)");
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::snr:
      return "snr";
    case SweepAxis::pilots:
      return "pilots";
    case SweepAxis::irs_size:
      return "irs_size";
    case SweepAxis::pattern:
      return "pattern";
  }
  return "unknown";
}

std::filesystem::path checkpoint_path(const ExperimentConfig& config, SweepAxis axis, const std::string& point) {
  if (axis == SweepAxis::snr) return config.output_dir / "model.irsw";
  return config.output_dir / ("model_" + to_string(axis) + "_" + point + ".irsw");
}

std::vector<ResultRow> run_sweep(const ExperimentConfig& config, SweepAxis axis, const SweepOptions& options) {
  config.validate();
  std::vector<ResultRow> rows;
  auto evaluate_point = [&](const ExperimentConfig& c, const std::string& label, const std::vector<double>& snrs) {
    c.validate();
    const PilotSetup setup = make_pilot_setup(c);
    if (options.log) options.log("sweep " + to_string(axis) + " point " + label);
    auto model = obtain_model(c, setup, checkpoint_path(c, axis, label), options);
    for (double snr : snrs) {
      const SampleSet test = evaluation_set(c, setup, snr);
      Evaluation e = evaluate(*model, test.data, c.timing);
      e.ms_ls = test.ls_time_ms;
      append_rows(rows, c, snr, e);
    }
  };

  switch (axis) {
    case SweepAxis::snr:
      evaluate_point(config, "mixed", config.sweep_snr_db);
      break;
    case SweepAxis::pilots:
      for (std::size_t b : config.sweep_b) {
        ExperimentConfig c = config;
        c.b = b;
        evaluate_point(c, std::to_string(b), config.snr_db);
      }
      break;
    case SweepAxis::irs_size:
      for (const GridSize& g : config.sweep_irs_size) {
        ExperimentConfig c = config;
        c.system.irs_rows = g.rows;
        c.system.irs_cols = g.cols;
        const std::size_t m0 = config.system.m(), m1 = c.system.m();
        c.b = std::max<std::size_t>(1, (config.b * m1 + m0 - 1) / m0);
        evaluate_point(c, std::to_string(g.rows) + "x" + std::to_string(g.cols), config.snr_db);
      }
      break;
    case SweepAxis::pattern:
      for (pilot::PatternKind p : config.sweep_pattern) {
        ExperimentConfig c = config;
        c.pattern = p;
        evaluate_point(c, pilot::to_string(p), config.snr_db);
      }
      break;
  }
  return rows;
}

}  // namespace irsmba::harness
