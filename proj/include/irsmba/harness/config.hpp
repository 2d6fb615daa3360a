// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "irsmba/channel/channel.hpp"
#include "irsmba/mba/model.hpp"
#include "irsmba/mba/train.hpp"
#include "irsmba/pilot/pilot.hpp"

namespace irsmba::harness {

enum class PsiKind { dft, hadamard, random_unimodular, quantized };
std::string to_string(PsiKind k);

struct GridSize {
  std::size_t rows = 0;
  std::size_t cols = 0;
};

struct ExperimentConfig {
  channel::SystemConfig system;

  pilot::PatternKind pattern = pilot::PatternKind::proposed;
  std::size_t b = 8;
  PsiKind psi = PsiKind::dft;
  unsigned psi_bits = 2;

  /// Training/validation data cycle through these SNRs per realization.
  std::vector<double> snr_db{10.0};
  std::size_t train_samples = 2000;
  std::size_t val_samples = 500;
  std::size_t test_samples = 500;
  std::uint64_t seed = 0;

  mba::ModelConfig model;
  std::size_t epochs_can = 400;
  std::size_t epochs_cmn = 400;
  std::size_t batch_size = 64;
  double lr_can = 2e-4;
  double lr_can_decay = 0.6;
  std::size_t lr_can_interval = 150;
  double lr_cmn = 1e-4;

  // Sweep axes.
  std::vector<double> sweep_snr_db{0.0, 10.0, 20.0};
  std::vector<std::size_t> sweep_b{8, 12, 16};
  std::vector<GridSize> sweep_irs_size{{2, 2}, {4, 4}};
  std::vector<pilot::PatternKind> sweep_pattern{pilot::PatternKind::column, pilot::PatternKind::row,
                                                pilot::PatternKind::random, pilot::PatternKind::proposed};

  // verify
  std::size_t verify_draws = 10000;
  std::size_t verify_random_designs = 1000;

  bool timing = false;
  bool dump_channels = false;
  std::filesystem::path output_dir = "out";

  mba::TrainConfig train_config(mba::Stage s) const;
  /// Throws ConfigError on any inconsistent setting.
  void validate() const;
};

/// Parses `key = value` lines (`#` starts a comment). Repeated keys keep the last value.
std::map<std::string, std::string> parse_key_values(const std::string& text);

/// Applies settings onto `config`; unknown keys and malformed values throw ConfigError.
void apply_settings(ExperimentConfig& config, const std::map<std::string, std::string>& kv);

/// Reads a config file, applies `overrides` (`key=value`), validates. `seed` is mandatory.
ExperimentConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

/// Builds a config from text only (used by tests and the Python module).
ExperimentConfig config_from_text(const std::string& text, const std::vector<std::string>& overrides = {});

/// Canonical `key = value` listing of every setting.
std::string format_config(const ExperimentConfig& config);

}  // namespace irsmba::harness
