// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>

#include "irsmba/mba/model.hpp"

namespace irsmba::mba {

struct GainReport {
  double nmse_ls = 0.0;
  double nmse_can = 0.0;
  double nmse_cmn = 0.0;
  double lambda_can = 0.0;  // (NMSE_LS - NMSE_CAN) / NMSE_LS
  double lambda_cmn = 0.0;  // (NMSE_CAN - NMSE_CMN) / NMSE_CAN
  /// (1 - lambda_can)(1 - lambda_cmn) NMSE_LS; equals nmse_cmn up to rounding.
  double first_power_nmse = 0.0;
  /// (1 - lambda_can)^2 (1 - lambda_cmn)^2 NMSE_LS, the amplitude-model form.
  double squared_nmse = 0.0;
};

/// Throws PreconditionError unless nmse_ls > 0 and nmse_can > 0.
GainReport gain_report(double nmse_ls, double nmse_can, double nmse_cmn);

/// Operation-count model of the networks per the layer-wise complexity
/// accounting: sum over convolutions of N_t M s^2 n_in n_out, plus
/// M N_t N_I per attention block, times K subcarriers. The six
/// attention projections are counted as 6 x one projection block.
struct FlopBreakdown {
  double can_conv = 0.0;
  double attention = 0.0;
  double projections = 0.0;
  double cmn_conv = 0.0;

  double can_total() const { return can_conv + attention + projections; }
  double mba_total() const { return can_total() + cmn_conv; }
};

FlopBreakdown flop_estimate(const ModelConfig& config, std::size_t n_t, std::size_t m, std::size_t k);

/// Real operations of the LS estimator with a precomputed pseudo-inverse:
/// one N_t x B by B x B complex product per subcarrier, 8 K N_t B^2.
double ls_flop_estimate(std::size_t n_t, std::size_t b, std::size_t k);

}  // namespace irsmba::mba
