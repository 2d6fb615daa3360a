// SPDX-License-Identifier: Apache-2.0
#include "irsmba/mba/report.hpp"

#include <cmath>

#include "irsmba/error.hpp"

namespace irsmba::mba {

GainReport gain_report(double nmse_ls, double nmse_can, double nmse_cmn) {
  if (!(nmse_ls > 0.0) || !(nmse_can > 0.0)) {
    throw PreconditionError("gain_report: NMSE_LS and NMSE_CAN must be positive");
  }
  GainReport r;
  r.nmse_ls = nmse_ls;
  r.nmse_can = nmse_can;
  r.nmse_cmn = nmse_cmn;
  r.lambda_can = (nmse_ls - nmse_can) / nmse_ls;
  r.lambda_cmn = (nmse_can - nmse_cmn) / nmse_can;
  const double a = 1.0 - r.lambda_can;
  const double b = 1.0 - r.lambda_cmn;
  r.first_power_nmse = a * b * nmse_ls;
  r.squared_nmse = a * a * b * b * nmse_ls;
  return r;
}

FlopBreakdown flop_estimate(const ModelConfig& c, std::size_t n_t, std::size_t m, std::size_t k) {
  const double f = static_cast<double>(c.width);
  const double d = static_cast<double>(c.attention_dim);
  const double pixels = static_cast<double>(n_t) * static_cast<double>(m);
  const double kk = static_cast<double>(k);

  // CAN: conv_in 2->F, conv_mid F->F, conv_out F->2, two post-attention d->F.
  const double can_sum = 9.0 * (2.0 * f + f * f + f * 2.0) + 2.0 * 9.0 * d * f;
  // One projection block: 1x1 F->d then 1x1 d->d.
  const double mb_sum = f * d + d * d;
  // CMN: conv_in, four block convs, conv_a (all 3x3 F->F except ends), conv_out, 1x1 skip.
  const double cmn_sum = 9.0 * (2.0 * f + 5.0 * f * f + f * 2.0) + 2.0 * 2.0;

  FlopBreakdown out;
  out.can_conv = kk * pixels * can_sum;
  out.attention = kk * 2.0 * pixels * f;
  out.projections = kk * 6.0 * pixels * mb_sum;
  out.cmn_conv = kk * pixels * cmn_sum;
  return out;
}

double ls_flop_estimate(std::size_t n_t, std::size_t b, std::size_t k) {
  return 8.0 * static_cast<double>(k) * static_cast<double>(n_t) * static_cast<double>(b) * static_cast<double>(b);
}

}  // namespace irsmba::mba
