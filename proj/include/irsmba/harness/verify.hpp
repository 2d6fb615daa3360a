// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "irsmba/channel/complex_matrix.hpp"
#include "irsmba/harness/config.hpp"
#include "irsmba/harness/experiment.hpp"

namespace irsmba::harness {

struct VerifyEntry {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double reference = 0.0;
  std::string detail;
  bool informational = false;  // reported but never fails the run
};

/// Monte-Carlo mean of ||H - H_LS||_F^2 with unit pilot power, H random per draw.
double mc_ls_mse(const ComplexMatrix& psi, std::size_t n_t, double sigma_n2, std::size_t draws, std::uint64_t seed);

struct EtfResult {
  std::size_t n = 0;
  double dft_objective = 0.0;
  double hadamard_objective = 0.0;  // 0 when n is not a power of two
  double best_random = 0.0;
  std::size_t strictly_better = 0;  // random designs whose objective beats DFT
  std::size_t singular = 0;         // random designs with an ill-conditioned Gram
};

/// Compares the DFT design of order n against `designs` seeded random unimodular designs.
EtfResult etf_check(std::size_t n, std::size_t n_t, double sigma_n2, std::size_t designs, std::uint64_t seed);

struct LinearFit {
  std::vector<double> m;
  std::vector<double> mse;
  double slope = 0.0;
  double intercept = 0.0;
};

/// Least-squares fit of Monte-Carlo LS MSE against M with Psi = DFT(M) / sqrt(M),
/// so that Psi Psi^H = I and the expected slope is N_t sigma_n^2.
LinearFit linear_in_m(const std::vector<std::size_t>& ms, std::size_t n_t, double sigma_n2, std::size_t draws,
                      std::uint64_t seed);

struct VerifyOptions {
  bool train_model = true;  // check (c) trains a model with the config's settings
  LogFn log;
};

/// Runs the trace-formula, pilot-design, stage-gain and linear-scaling checks.
std::vector<VerifyEntry> verify_theory(const ExperimentConfig& config, const VerifyOptions& options = {});

std::string format_report(const std::vector<VerifyEntry>& entries);
bool all_passed(const std::vector<VerifyEntry>& entries);

}  // namespace irsmba::harness
