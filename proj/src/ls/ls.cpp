// SPDX-License-Identifier: Apache-2.0
#include "irsmba/ls/ls.hpp"

#include <cmath>
#include <sstream>

#include "irsmba/error.hpp"

namespace irsmba::ls {

double snr_db(double pilot_power, double sigma_n2) { return 10.0 * std::log10(pilot_power / sigma_n2); }

double noise_variance_for_snr(double snr, double pilot_power) { return pilot_power * std::pow(10.0, -snr / 10.0); }

RxBlock synthesize_rx(const ComplexMatrix& h_cs, const ComplexMatrix& psi, double sigma_n2, double pilot_power,
                      Rng& rng) {
  if (h_cs.cols() != psi.rows()) {
    std::ostringstream msg;
    msg << "synthesize_rx: H_cs has " << h_cs.cols() << " columns but Psi has " << psi.rows() << " rows";
    throw DimensionError(msg.str());
  }
  if (sigma_n2 < 0.0) throw PreconditionError("synthesize_rx: noise variance must be >= 0");
  if (!(pilot_power > 0.0)) throw PreconditionError("synthesize_rx: pilot power must be > 0");
  RxBlock rx;
  rx.y = h_cs * psi;
  rx.snr_db = sigma_n2 > 0.0 ? snr_db(pilot_power, sigma_n2) : INFINITY;
  if (sigma_n2 > 0.0) {
    const double var = sigma_n2 / pilot_power;
    for (cplx& v : rx.y.data()) v += complex_gaussian(rng, var);
  }
  return rx;
}

ComplexMatrix ls_estimate(const ComplexMatrix& y, const ComplexMatrix& psi) {
  if (psi.rows() > psi.cols()) {
    std::ostringstream msg;
    msg << "ls_estimate: " << psi.cols() << " training slots cannot resolve " << psi.rows()
        << " reflecting elements (the full estimator needs B >= M); deactivate elements and use the reduced design";
    throw PreconditionError(msg.str());
  }
  if (y.cols() != psi.cols()) {
    std::ostringstream msg;
    msg << "ls_estimate: Y has " << y.cols() << " columns but Psi has " << psi.cols();
    throw DimensionError(msg.str());
  }
  const ComplexMatrix psi_h = psi.hermitian();
  return y * psi_h * hermitian_inverse(psi * psi_h);
}

ComplexMatrix augment_zeros(const ComplexMatrix& h_reduced, const pilot::ActivationPattern& pattern) {
  const auto idx = pattern.active_indices();
  if (idx.size() != h_reduced.cols()) {
    std::ostringstream msg;
    msg << "augment_zeros: estimate has " << h_reduced.cols() << " columns but pattern has " << idx.size()
        << " active elements";
    throw DimensionError(msg.str());
  }
  ComplexMatrix out(h_reduced.rows(), pattern.m());
  for (std::size_t i = 0; i < h_reduced.rows(); ++i) {
    for (std::size_t j = 0; j < idx.size(); ++j) out(i, idx[j]) = h_reduced(i, j);
  }
  return out;
}

ComplexMatrix compress_columns(const ComplexMatrix& h_full, const pilot::ActivationPattern& pattern) {
  if (h_full.cols() != pattern.m()) throw DimensionError("compress_columns: column count differs from pattern size");
  const auto idx = pattern.active_indices();
  if (idx.empty()) throw PreconditionError("compress_columns: pattern has no active elements");
  ComplexMatrix out(h_full.rows(), idx.size());
  for (std::size_t i = 0; i < h_full.rows(); ++i) {
    for (std::size_t j = 0; j < idx.size(); ++j) out(i, j) = h_full(i, idx[j]);
  }
  return out;
}

EstimateRecord estimate_reduced(const ComplexMatrix& h_cs, const pilot::PhaseMatrix& psi_full,
                                const pilot::ActivationPattern& pattern, double sigma_n2, double pilot_power,
                                Rng& rng) {
  if (psi_full.m() != pattern.m()) throw DimensionError("estimate_reduced: Psi rows differ from pattern size");
  // Deactivated rows of Psi are zero, so H_cs Psi only sees active columns.
  const RxBlock rx = synthesize_rx(h_cs, psi_full.psi, sigma_n2, pilot_power, rng);
  const ComplexMatrix psi_active = pilot::compress_rows(psi_full.psi, pattern);
  EstimateRecord rec;
  rec.h_true = h_cs;
  rec.h_ls_reduced = ls_estimate(rx.y, psi_active);
  rec.h_aug = augment_zeros(rec.h_ls_reduced, pattern);
  rec.pattern = pattern;
  return rec;
}

double nmse(const ComplexMatrix& h_true, const ComplexMatrix& h_est) {
  if (h_true.rows() != h_est.rows() || h_true.cols() != h_est.cols()) throw DimensionError("nmse: dims differ");
  const double ref = h_true.frobenius_norm_sq();
  if (!(ref > 0.0)) throw PreconditionError("nmse: true channel has zero norm");
  return (h_true - h_est).frobenius_norm_sq() / ref;
}

double nmse_batch(std::span<const ComplexMatrix> h_true, std::span<const ComplexMatrix> h_est) {
  if (h_true.size() != h_est.size()) throw DimensionError("nmse_batch: sample counts differ");
  if (h_true.empty()) throw PreconditionError("nmse_batch: empty batch");
  double s = 0.0;
  for (std::size_t i = 0; i < h_true.size(); ++i) s += nmse(h_true[i], h_est[i]);
  return s / static_cast<double>(h_true.size());
}

}  // namespace irsmba::ls
