// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "irsmba/harness/config.hpp"
#include "irsmba/harness/dataset.hpp"
#include "irsmba/harness/results.hpp"
#include "irsmba/mba/model.hpp"
#include "irsmba/mba/report.hpp"
#include "irsmba/mba/train.hpp"

namespace irsmba::harness {

using LogFn = std::function<void(const std::string&)>;

struct TrainedModel {
  std::unique_ptr<mba::MbaModel> model;
  std::vector<mba::LossRecord> trace;
};

/// Trains CAN, then CMN on the frozen CAN, with the config's hyperparameters.
TrainedModel train_model(const ExperimentConfig& config, const SplitDataset& data, const LogFn& log = {});

struct Evaluation {
  double nmse_ls = 0.0;
  double nmse_can = 0.0;
  double nmse_mba = 0.0;
  double ms_ls = 0.0;
  double ms_can = 0.0;
  double ms_mba = 0.0;

  mba::GainReport gains() const { return mba::gain_report(nmse_ls, nmse_can, nmse_mba); }
};

/// Held-out NMSE of the zero-augmented LS input, CAN output and full MBA output.
Evaluation evaluate(mba::MbaModel& model, const mba::Dataset& test, bool timing = false);

/// Test set at a single SNR drawn from the evaluation seed range, shared by
/// every sweep point with the same system and pilot setup.
SampleSet evaluation_set(const ExperimentConfig& config, const PilotSetup& setup, double snr_db);

enum class SweepAxis { snr, pilots, irs_size, pattern };
SweepAxis parse_axis(const std::string& name);
std::string to_string(SweepAxis axis);

struct SweepOptions {
  bool train = false;  // train missing models instead of loading checkpoints
  LogFn log;
};

/// NMSE rows for ls_aug, can and mba at every point of `axis`.
///
/// snr: one model trained over config.snr_db, evaluated at each sweep_snr_db.
/// pilots / irs_size / pattern: one model per point, evaluated at each
/// config.snr_db. For irs_size, B scales with the element count
/// (ceil(b * M_point / M)). Checkpoints live in output_dir as
/// model.irsw (snr) or model_<axis>_<value>.irsw.
std::vector<ResultRow> run_sweep(const ExperimentConfig& config, SweepAxis axis, const SweepOptions& options);

std::filesystem::path checkpoint_path(const ExperimentConfig& config, SweepAxis axis, const std::string& point);

}  // namespace irsmba::harness
