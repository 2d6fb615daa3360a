// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "irsmba/channel/complex_matrix.hpp"
#include "irsmba/random.hpp"

namespace irsmba::channel {

/// Wrapped-Gaussian angle statistics for one link, radians.
struct LinkAngles {
  double irs_azimuth_mean = 0.0;
  double irs_azimuth_spread = 0.0;
  double irs_elevation_mean = 1.5707963267948966;
  double irs_elevation_spread = 0.0;
  double bs_azimuth_mean = 0.0;
  double bs_azimuth_spread = 0.0;
};

/// log10 of the RMS delay spread is Gaussian with
///   mean  = mu_slope * log10(1 + f_c[GHz]) + mu_offset
///   stdev = sigma_slope * log10(1 + f_c[GHz]) + sigma_offset
/// Defaults are the urban-micro law.
struct DelaySpreadLaw {
  double mu_slope = -0.24;
  double mu_offset = -6.83;
  double sigma_slope = 0.16;
  double sigma_offset = 0.28;

  double mu_log10(double fc_ghz) const;
  double sigma_log10(double fc_ghz) const;
};

/// How per-path average powers are scaled after the exponential delay profile.
/// `unit_sum` makes the powers sum to one; `unit_mean` makes them sum to the
/// path count, which keeps E|H_cs(i,j)|^2 = 1.
enum class PathPower { unit_sum, unit_mean };

struct SystemConfig {
  std::size_t n_t = 16;
  std::size_t irs_rows = 12;
  std::size_t irs_cols = 12;
  std::size_t n_subcarriers = 16;
  double sampling_rate = 100e6;  // Hz
  double carrier_freq = 28.0;    // GHz
  std::size_t l_bs_irs = 4;
  std::size_t l_mu_irs = 10;
  double noise_variance = 0.1;
  double pilot_power = 1.0;
  double delay_scaling = 2.1;  // r_tau
  DelaySpreadLaw delay_spread;
  PathPower path_power = PathPower::unit_mean;
  LinkAngles bs_irs_angles{0.6981317007977318, 0.14, 1.7453292519943295, 0.14, -0.3490658503988659, 0.14};
  LinkAngles mu_irs_angles{-0.5235987755982988, 0.17, 1.3962634015954636, 0.17, 0.0, 0.0};

  std::size_t m() const { return irs_rows * irs_cols; }
  void validate() const;
};

enum class Link { bs_irs, mu_irs };

struct Path {
  double delay = 0.0;  // seconds
  cplx gain;
  double irs_azimuth = 0.0;
  double irs_elevation = 0.0;
  double bs_azimuth = 0.0;
};

struct PathSet {
  std::vector<Path> paths;
  double delay_spread = 0.0;  // X_DS, seconds
  double delay_scaling = 0.0;
};

/// Per-subcarrier channels of one multipath draw.
struct ChannelRealization {
  std::vector<ComplexMatrix> g;     // N_t x M
  std::vector<ComplexMatrix> hr;    // M x 1
  std::vector<ComplexMatrix> h_cs;  // N_t x M
};

/// Half-wavelength ULA response: entry m = exp(j*pi*m*sin(phi)) / sqrt(n).
ComplexMatrix ula_response(double phi, std::size_t n);

/// Half-wavelength UPA response, row-major over (n_x, n_y), 0-based indices:
/// entry = exp(j*pi*(n_x sin(phi) sin(theta) + n_y cos(theta))) / sqrt(nx*ny).
ComplexMatrix upa_response(double phi, double theta, std::size_t nx, std::size_t ny);

/// Raw (unshifted, unsorted) delays tau_l = -r_tau * X_DS * ln(U_l).
std::vector<double> delays_from_uniforms(double delay_spread, double delay_scaling, std::span<const double> uniforms);

/// Draws delays, gains and angles for one link. Delays are anchored at zero
/// and sorted ascending; per-path powers follow an exponential delay profile
/// scaled per `config.path_power`.
PathSet sample_cdl_params(const SystemConfig& config, Link link, Rng& rng);

/// BS-IRS response G_k (N_t x M).
ComplexMatrix freq_response_g(const PathSet& paths, const SystemConfig& config, std::size_t k);
/// IRS-user response h_r,k (M x 1).
ComplexMatrix freq_response_hr(const PathSet& paths, const SystemConfig& config, std::size_t k);

/// G diag(hr): column m of G scaled by hr[m].
ComplexMatrix cascaded_channel(const ComplexMatrix& g, const ComplexMatrix& hr);

/// Draws both links and evaluates every subcarrier.
ChannelRealization draw_realization(const SystemConfig& config, Rng& rng);

}  // namespace irsmba::channel
