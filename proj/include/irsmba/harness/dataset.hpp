// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "irsmba/channel/complex_matrix.hpp"
#include "irsmba/harness/config.hpp"
#include "irsmba/mba/train.hpp"
#include "irsmba/pilot/pilot.hpp"

namespace irsmba::harness {

/// Realization indices at or above this value are reserved for evaluation sets,
/// so they never overlap the training pool.
inline constexpr std::uint64_t kEvalIndexBase = std::uint64_t{1} << 40;

struct PilotSetup {
  pilot::ActivationPattern pattern;
  pilot::PhaseMatrix base;  // B x B design over the active elements
  pilot::PhaseMatrix psi;   // M x B, zero rows at deactivated elements
};

PilotSetup make_pilot_setup(const ExperimentConfig& config);

/// Real [2, N_t, M] layout: channel 0 real parts, channel 1 imaginary parts.
void write_complex(const ComplexMatrix& h, double* dst);
ComplexMatrix read_complex(const double* src, std::size_t n_t, std::size_t m);

struct SampleSet {
  mba::Dataset data;          // inputs: zero-augmented LS estimates, targets: H_cs
  std::vector<double> snr_db;  // per sample
  std::vector<ComplexMatrix> channels;  // only when requested
  double ls_time_ms = 0.0;              // wall time spent in LS estimation
};

/// `count` samples, one per (realization, subcarrier), realization-major.
/// Realization r uses channel and noise seeds derived from (seed, index_base + r)
/// and the SNR snr_list[r % size].
SampleSet generate_samples(const ExperimentConfig& config, const PilotSetup& setup, const std::vector<double>& snr_list,
                           std::size_t count, std::uint64_t index_base, bool keep_channels = false);

struct SplitDataset {
  mba::Dataset train;
  mba::Dataset val;
  mba::Dataset test;
  std::vector<ComplexMatrix> channels;  // generation order, when dump_channels is set
};

/// Draws train + val + test samples over config.snr_db and splits them with a
/// seeded shuffle.
SplitDataset build_dataset(const ExperimentConfig& config, const PilotSetup& setup);

/// Writes {train,val,test}_{input,target}.irst, pattern.txt and, if present, channels.irst.
void write_dataset(const std::filesystem::path& dir, const SplitDataset& ds, const PilotSetup& setup);
mba::Dataset read_split(const std::filesystem::path& dir, const std::string& split);

}  // namespace irsmba::harness
