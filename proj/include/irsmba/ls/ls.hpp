// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>

#include "irsmba/channel/complex_matrix.hpp"
#include "irsmba/pilot/pilot.hpp"
#include "irsmba/random.hpp"

namespace irsmba::ls {

/// Pilot-normalised received block Y_k (N_t x B).
struct RxBlock {
  ComplexMatrix y;
  std::size_t subcarrier = 0;
  double snr_db = 0.0;
};

struct EstimateRecord {
  ComplexMatrix h_true;        // N_t x M
  ComplexMatrix h_ls_reduced;  // N_t x B
  ComplexMatrix h_aug;         // N_t x M
  pilot::ActivationPattern pattern;
};

/// SNR in dB for pilot power p and noise variance sigma_n2: 10 log10(p / sigma_n2).
double snr_db(double pilot_power, double sigma_n2);
/// Noise variance that yields `snr` dB at pilot power p.
double noise_variance_for_snr(double snr, double pilot_power);

/// Y = H_cs Psi + N with N ~ CN(0, sigma_n2 / p) i.i.d.
RxBlock synthesize_rx(const ComplexMatrix& h_cs, const ComplexMatrix& psi, double sigma_n2, double pilot_power, Rng& rng);

/// Y Psi^H (Psi Psi^H)^-1. Psi must have no more rows than columns
/// (the estimator needs B >= M); for deactivated elements pass the compressed
/// B x B design.
ComplexMatrix ls_estimate(const ComplexMatrix& y, const ComplexMatrix& psi);

/// Places the N_t x B reduced estimate at the active columns of an N_t x M matrix.
ComplexMatrix augment_zeros(const ComplexMatrix& h_reduced, const pilot::ActivationPattern& pattern);

/// Inverse of augment_zeros: keeps only active columns.
ComplexMatrix compress_columns(const ComplexMatrix& h_full, const pilot::ActivationPattern& pattern);

/// Full pipeline for one subcarrier: observe with the active rows of `psi_full`
/// (M x B), estimate the active columns, zero-fill the rest.
EstimateRecord estimate_reduced(const ComplexMatrix& h_cs, const pilot::PhaseMatrix& psi_full,
                                const pilot::ActivationPattern& pattern, double sigma_n2, double pilot_power,
                                Rng& rng);

/// ||h_true - h_est||_F^2 / ||h_true||_F^2.
double nmse(const ComplexMatrix& h_true, const ComplexMatrix& h_est);
/// Mean of per-sample NMSE ratios.
double nmse_batch(std::span<const ComplexMatrix> h_true, std::span<const ComplexMatrix> h_est);

}  // namespace irsmba::ls
