// SPDX-License-Identifier: Apache-2.0
#include "irsmba/channel/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "irsmba/error.hpp"

namespace irsmba::channel {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_azimuth(double a) {
  a = std::remainder(a, 2.0 * kPi);
  if (a > kPi) a = kPi;
  if (a < -kPi) a = -kPi;
  return a;
}

double reflect_elevation(double e) {
  e = std::fmod(e, 2.0 * kPi);
  if (e < 0.0) e += 2.0 * kPi;
  if (e > kPi) e = 2.0 * kPi - e;
  return e;
}

double draw_angle(Rng& rng, double mean, double spread) {
  if (spread <= 0.0) return mean;
  std::normal_distribution<double> n(mean, spread);
  return n(rng);
}

void check_k(const SystemConfig& config, std::size_t k) {
  if (k >= config.n_subcarriers) {
    std::ostringstream msg;
    msg << "subcarrier index " << k << " out of range [0, " << config.n_subcarriers << ")";
    throw PreconditionError(msg.str());
  }
}

cplx delay_phase(double tau, const SystemConfig& config, std::size_t k) {
  const double arg = -2.0 * kPi * tau * config.sampling_rate * static_cast<double>(k) /
                     static_cast<double>(config.n_subcarriers);
  return std::polar(1.0, arg);
}

}  // namespace

double DelaySpreadLaw::mu_log10(double fc_ghz) const { return mu_slope * std::log10(1.0 + fc_ghz) + mu_offset; }

double DelaySpreadLaw::sigma_log10(double fc_ghz) const {
  return sigma_slope * std::log10(1.0 + fc_ghz) + sigma_offset;
}

void SystemConfig::validate() const {
  if (n_t == 0 || irs_rows == 0 || irs_cols == 0 || n_subcarriers == 0 || l_bs_irs == 0 || l_mu_irs == 0) {
    throw PreconditionError("system config: all counts must be >= 1");
  }
  if (!(noise_variance > 0.0)) throw PreconditionError("system config: noise_variance must be > 0");
  if (!(carrier_freq > 0.0)) throw PreconditionError("system config: carrier_freq must be > 0");
  if (!(sampling_rate > 0.0)) throw PreconditionError("system config: sampling_rate must be > 0");
  if (!(pilot_power > 0.0)) throw PreconditionError("system config: pilot_power must be > 0");
  if (!(delay_scaling > 1.0)) throw PreconditionError("system config: delay_scaling must be > 1");
}

ComplexMatrix ula_response(double phi, std::size_t n) {
  if (n == 0) throw DimensionError("ula_response: n must be >= 1");
  ComplexMatrix a(n, 1);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  const double s = std::sin(phi);
  for (std::size_t m = 0; m < n; ++m) a(m, 0) = std::polar(norm, kPi * static_cast<double>(m) * s);
  return a;
}

ComplexMatrix upa_response(double phi, double theta, std::size_t nx, std::size_t ny) {
  if (nx == 0 || ny == 0) throw DimensionError("upa_response: grid dims must be >= 1");
  ComplexMatrix a(nx * ny, 1);
  const double norm = 1.0 / std::sqrt(static_cast<double>(nx * ny));
  const double u = std::sin(phi) * std::sin(theta);
  const double v = std::cos(theta);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      a(x * ny + y, 0) = std::polar(norm, kPi * (static_cast<double>(x) * u + static_cast<double>(y) * v));
    }
  }
  return a;
}

std::vector<double> delays_from_uniforms(double delay_spread, double delay_scaling, std::span<const double> uniforms) {
  std::vector<double> tau;
  tau.reserve(uniforms.size());
  for (double u : uniforms) tau.push_back(-delay_scaling * delay_spread * std::log(u));
  return tau;
}

PathSet sample_cdl_params(const SystemConfig& config, Link link, Rng& rng) {
  const std::size_t n_paths = link == Link::bs_irs ? config.l_bs_irs : config.l_mu_irs;
  const LinkAngles& ang = link == Link::bs_irs ? config.bs_irs_angles : config.mu_irs_angles;

  PathSet out;
  out.delay_scaling = config.delay_scaling;
  std::normal_distribution<double> log_ds(config.delay_spread.mu_log10(config.carrier_freq),
                                          config.delay_spread.sigma_log10(config.carrier_freq));
  out.delay_spread = std::pow(10.0, log_ds(rng));

  // U in (0, 1]: 1 - U(0,1) avoids log(0).
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> u(n_paths);
  for (double& x : u) x = 1.0 - unif(rng);
  std::vector<double> tau = delays_from_uniforms(out.delay_spread, out.delay_scaling, u);
  const double tmin = *std::min_element(tau.begin(), tau.end());
  for (double& t : tau) t -= tmin;
  std::sort(tau.begin(), tau.end());

  std::vector<double> power(n_paths);
  double total = 0.0;
  const double r = out.delay_scaling;
  for (std::size_t i = 0; i < n_paths; ++i) {
    power[i] = std::exp(-tau[i] * (r - 1.0) / (r * out.delay_spread));
    total += power[i];
  }
  const double target = config.path_power == PathPower::unit_sum ? 1.0 : static_cast<double>(n_paths);
  for (double& p : power) p *= target / total;

  out.paths.resize(n_paths);
  for (std::size_t i = 0; i < n_paths; ++i) {
    Path& p = out.paths[i];
    p.delay = tau[i];
    p.gain = complex_gaussian(rng, power[i]);
    p.irs_azimuth = wrap_azimuth(draw_angle(rng, ang.irs_azimuth_mean, ang.irs_azimuth_spread));
    p.irs_elevation = reflect_elevation(draw_angle(rng, ang.irs_elevation_mean, ang.irs_elevation_spread));
    if (link == Link::bs_irs) p.bs_azimuth = wrap_azimuth(draw_angle(rng, ang.bs_azimuth_mean, ang.bs_azimuth_spread));
  }
  return out;
}

ComplexMatrix freq_response_g(const PathSet& paths, const SystemConfig& config, std::size_t k) {
  if (paths.paths.empty()) throw PreconditionError("freq_response_g: empty path set");
  check_k(config, k);
  const std::size_t nt = config.n_t, m = config.m();
  const double scale = std::sqrt(static_cast<double>(nt * m) / static_cast<double>(paths.paths.size()));
  ComplexMatrix g(nt, m);
  for (const Path& p : paths.paths) {
    const cplx c = scale * p.gain * delay_phase(p.delay, config, k);
    if (c == cplx{}) continue;
    const ComplexMatrix a_bs = ula_response(p.bs_azimuth, nt);
    const ComplexMatrix a_irs = upa_response(p.irs_azimuth, p.irs_elevation, config.irs_rows, config.irs_cols);
    for (std::size_t i = 0; i < nt; ++i) {
      const cplx ci = c * a_bs(i, 0);
      for (std::size_t j = 0; j < m; ++j) g(i, j) += ci * std::conj(a_irs(j, 0));
    }
  }
  return g;
}

ComplexMatrix freq_response_hr(const PathSet& paths, const SystemConfig& config, std::size_t k) {
  if (paths.paths.empty()) throw PreconditionError("freq_response_hr: empty path set");
  check_k(config, k);
  const std::size_t m = config.m();
  const double scale = std::sqrt(static_cast<double>(m) / static_cast<double>(paths.paths.size()));
  ComplexMatrix h(m, 1);
  for (const Path& p : paths.paths) {
    const cplx c = scale * p.gain * delay_phase(p.delay, config, k);
    if (c == cplx{}) continue;
    const ComplexMatrix a_irs = upa_response(p.irs_azimuth, p.irs_elevation, config.irs_rows, config.irs_cols);
    for (std::size_t j = 0; j < m; ++j) h(j, 0) += c * a_irs(j, 0);
  }
  return h;
}

ComplexMatrix cascaded_channel(const ComplexMatrix& g, const ComplexMatrix& hr) {
  if (hr.cols() != 1 || hr.rows() != g.cols()) {
    std::ostringstream msg;
    msg << "cascaded_channel: G is " << g.rows() << "x" << g.cols() << " but h_r is " << hr.rows() << "x" << hr.cols();
    throw DimensionError(msg.str());
  }
  ComplexMatrix out = g;
  for (std::size_t i = 0; i < g.rows(); ++i) {
    for (std::size_t j = 0; j < g.cols(); ++j) out(i, j) *= hr(j, 0);
  }
  return out;
}

ChannelRealization draw_realization(const SystemConfig& config, Rng& rng) {
  config.validate();
  const PathSet bs = sample_cdl_params(config, Link::bs_irs, rng);
  const PathSet mu = sample_cdl_params(config, Link::mu_irs, rng);
  ChannelRealization r;
  r.g.reserve(config.n_subcarriers);
  r.hr.reserve(config.n_subcarriers);
  r.h_cs.reserve(config.n_subcarriers);
  for (std::size_t k = 0; k < config.n_subcarriers; ++k) {
    r.g.push_back(freq_response_g(bs, config, k));
    r.hr.push_back(freq_response_hr(mu, config, k));
    r.h_cs.push_back(cascaded_channel(r.g.back(), r.hr.back()));
  }
  return r;
}

}  // namespace irsmba::channel
