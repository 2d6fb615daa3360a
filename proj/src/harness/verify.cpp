// SPDX-License-Identifier: Apache-2.0
#include "irsmba/harness/verify.hpp"

#include <cmath>
#include <cstdio>

#include "irsmba/error.hpp"
#include "irsmba/ls/ls.hpp"
#include "irsmba/pilot/pilot.hpp"

namespace irsmba::harness {

namespace {

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

bool power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

double mc_ls_mse(const ComplexMatrix& psi, std::size_t n_t, double sigma_n2, std::size_t draws, std::uint64_t seed) {
  if (draws == 0) throw PreconditionError("mc_ls_mse: draws must be positive");
  Rng rng(seed);
  double acc = 0.0;
  for (std::size_t d = 0; d < draws; ++d) {
    ComplexMatrix h(n_t, psi.rows());
    for (cplx& v : h.data()) v = complex_gaussian(rng, 1.0);
    const ls::RxBlock rx = ls::synthesize_rx(h, psi, sigma_n2, 1.0, rng);
    acc += (ls::ls_estimate(rx.y, psi) - h).frobenius_norm_sq();
  }
  return acc / static_cast<double>(draws);
}

EtfResult etf_check(std::size_t n, std::size_t n_t, double sigma_n2, std::size_t designs, std::uint64_t seed) {
  EtfResult r;
  r.n = n;
  r.dft_objective = pilot::ls_mse_objective(pilot::dft_matrix(n).psi, n_t, sigma_n2);
  if (power_of_two(n)) r.hadamard_objective = pilot::ls_mse_objective(pilot::hadamard_matrix(n).psi, n_t, sigma_n2);
  r.best_random = INFINITY;
  for (std::size_t i = 0; i < designs; ++i) {
    Rng rng(derive_seed(seed, n, i));
    const pilot::PhaseMatrix p = pilot::random_unimodular(n, n, rng);
    try {
      const double obj = pilot::ls_mse_objective(p.psi, n_t, sigma_n2);
      r.best_random = std::min(r.best_random, obj);
      if (obj < r.dft_objective * (1.0 - 1e-12)) ++r.strictly_better;
    } catch (const SingularMatrixError&) {
      ++r.singular;
    }
  }
  return r;
}

LinearFit linear_in_m(const std::vector<std::size_t>& ms, std::size_t n_t, double sigma_n2, std::size_t draws,
                      std::uint64_t seed) {
  if (ms.size() < 2) throw PreconditionError("linear_in_m: need at least two IRS sizes");
  LinearFit fit;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    ComplexMatrix psi = pilot::dft_matrix(ms[i]).psi;
    psi *= cplx(1.0 / std::sqrt(static_cast<double>(ms[i])), 0.0);
    fit.m.push_back(static_cast<double>(ms[i]));
    fit.mse.push_back(mc_ls_mse(psi, n_t, sigma_n2, draws, derive_seed(seed, ms[i], i)));
  }
  const double n = static_cast<double>(fit.m.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < fit.m.size(); ++i) {
    mx += fit.m[i] / n;
    my += fit.mse[i] / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < fit.m.size(); ++i) {
    sxy += (fit.m[i] - mx) * (fit.mse[i] - my);
    sxx += (fit.m[i] - mx) * (fit.m[i] - mx);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

std::vector<VerifyEntry> verify_theory(const ExperimentConfig& config, const VerifyOptions& options) {
  config.validate();
  const std::size_t n_t = config.system.n_t;
  const double sigma2 = config.system.noise_variance;
  const std::uint64_t base = derive_seed(config.seed, stream::verify, 0);
  std::vector<VerifyEntry> out;
  auto log = [&](const std::string& s) {
    if (options.log) options.log(s);
  };

  // (a) Monte-Carlo LS MSE against the trace formula.
  for (std::size_t m : {std::size_t{8}, std::size_t{16}}) {
    log("verify: trace formula M=" + std::to_string(m));
    const ComplexMatrix psi = pilot::dft_matrix(m).psi;
    const double analytic = pilot::ls_mse_objective(psi, n_t, sigma2);
    const double mc = mc_ls_mse(psi, n_t, sigma2, config.verify_draws, derive_seed(base, 1, m));
    const double rel = std::abs(mc / analytic - 1.0);
    out.push_back({"trace_formula_m" + std::to_string(m), rel < 0.03, mc, analytic,
                   fmt("relative deviation %.4g (limit 0.03)", rel)});
  }

  // (b) DFT and Hadamard against random unimodular designs.
  for (std::size_t n : {std::size_t{4}, std::size_t{8}, std::size_t{16}}) {
    log("verify: pilot design n=" + std::to_string(n));
    const EtfResult r = etf_check(n, n_t, sigma2, config.verify_random_designs, derive_seed(base, 2, n));
    out.push_back({"dft_vs_random_n" + std::to_string(n), r.strictly_better == 0, r.dft_objective, r.best_random,
                   fmt("%.0f random designs strictly better; %.0f singular", static_cast<double>(r.strictly_better),
                       static_cast<double>(r.singular))});
    const double diff = std::abs(r.hadamard_objective - r.dft_objective);
    out.push_back({"hadamard_eq_dft_n" + std::to_string(n), diff <= 1e-12, r.hadamard_objective, r.dft_objective,
                   fmt("absolute difference %.3g (limit 1e-12)", diff)});
  }

  // (c) Stage gains of a trained model.
  if (options.train_model) {
    log("verify: training model for stage gains");
    const PilotSetup setup = make_pilot_setup(config);
    const SplitDataset data = build_dataset(config, setup);
    TrainedModel tm = train_model(config, data, options.log);
    const Evaluation e = evaluate(*tm.model, data.test);
    const mba::GainReport g = e.gains();
    const double gap = std::abs(g.first_power_nmse - g.nmse_cmn);
    out.push_back({"first_power_identity", gap <= 1e-12 * std::max(1.0, g.nmse_cmn), g.first_power_nmse, g.nmse_cmn,
                   fmt("absolute gap %.3g", gap)});
    out.push_back({"lambda_can", g.lambda_can > 0.0, g.lambda_can, 0.0, "NMSE reduction of the first stage", true});
    out.push_back({"lambda_cmn", g.lambda_cmn > 0.0, g.lambda_cmn, 0.0, "NMSE reduction of the second stage", true});
    out.push_back({"squared_form_nmse", true, g.squared_nmse, g.nmse_cmn, "amplitude-model prediction vs measured",
                   true});
  }

  // (d) LS MSE linear in M with Psi Psi^H = I.
  log("verify: linear scaling in M");
  const LinearFit fit = linear_in_m({4, 8, 16, 32}, n_t, sigma2, config.verify_draws, derive_seed(base, 4, 0));
  const double expected = static_cast<double>(n_t) * sigma2;
  const double rel = std::abs(fit.slope / expected - 1.0);
  out.push_back({"linear_in_m_slope", rel < 0.05, fit.slope, expected, fmt("relative deviation %.4g (limit 0.05)", rel)});
  return out;
}

std::string format_report(const std::vector<VerifyEntry>& entries) {
  std::string s;
  for (const auto& e : entries) {
    char buf[96];
    std::snprintf(buf, sizeof buf, " measured=%.9g reference=%.9g ", e.measured, e.reference);
    s += (e.informational ? "INFO " : (e.passed ? "PASS " : "FAIL ")) + e.name + buf + e.detail + "\n";
  }
  return s;
}

bool all_passed(const std::vector<VerifyEntry>& entries) {
  for (const auto& e : entries) {
    if (!e.informational && !e.passed) return false;
  }
  return true;
}

}  // namespace irsmba::harness
