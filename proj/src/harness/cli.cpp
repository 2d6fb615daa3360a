// SPDX-License-Identifier: Apache-2.0
#include "irsmba/harness/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>

#include "irsmba/error.hpp"
#include "irsmba/harness/config.hpp"
#include "irsmba/harness/container.hpp"
#include "irsmba/harness/experiment.hpp"
#include "irsmba/harness/results.hpp"
#include "irsmba/harness/verify.hpp"

namespace irsmba::harness {

namespace {

struct Common {
  std::string config;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "experiment config file")->required();
  sub->add_option("--set", c.overrides, "override a setting, key=value (repeatable)");
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

tensor::Tensor as_tensor(const ComplexMatrix& m) {
  tensor::Tensor t({m.rows(), m.cols(), 2});
  for (std::size_t i = 0; i < m.size(); ++i) {
    t[2 * i] = m.data()[i].real();
    t[2 * i + 1] = m.data()[i].imag();
  }
  return t;
}

void print_evaluation(std::ostream& out, double snr, const Evaluation& e) {
  const mba::GainReport g = e.gains();
  out << "snr_db " << fmt("%g", snr) << ": nmse_ls " << fmt("%.6g", e.nmse_ls) << " nmse_can " << fmt("%.6g", e.nmse_can)
      << " nmse_mba " << fmt("%.6g", e.nmse_mba) << " lambda_can " << fmt("%.4f", g.lambda_can) << " lambda_cmn "
      << fmt("%.4f", g.lambda_cmn) << "\n";
}

int cmd_generate(const ExperimentConfig& c, std::ostream& out) {
  const PilotSetup setup = make_pilot_setup(c);
  const SplitDataset ds = build_dataset(c, setup);
  const auto dir = c.output_dir / "data";
  write_dataset(dir, ds, setup);
  out << "wrote " << ds.train.size() << "/" << ds.val.size() << "/" << ds.test.size()
      << " train/val/test samples to " << dir.string() << "\n";
  return kExitOk;
}

int cmd_design_psi(const ExperimentConfig& c, std::ostream& out) {
  const PilotSetup setup = make_pilot_setup(c);
  std::filesystem::create_directories(c.output_dir);
  write_records(c.output_dir / "psi.irst", {{DType::f64, as_tensor(setup.base.psi)}, {DType::f64, as_tensor(setup.psi.psi)}});
  pilot::export_pattern(setup.pattern, c.output_dir / "pattern.txt");
  out << "psi " << to_string(c.psi) << " b " << c.b << " pattern " << pilot::to_string(c.pattern) << "\n";
  out << "ls_mse_objective " << fmt("%.9g", pilot::ls_mse_objective(setup.base.psi, c.system.n_t, c.system.noise_variance))
      << "\n";
  out << pilot::format_pattern(setup.pattern);
  return kExitOk;
}

int cmd_train(const ExperimentConfig& c, std::ostream& out, const LogFn& log) {
  const PilotSetup setup = make_pilot_setup(c);
  const SplitDataset ds = build_dataset(c, setup);
  TrainedModel tm = train_model(c, ds, log);
  std::filesystem::create_directories(c.output_dir);
  tm.model->save(c.output_dir / "model.irsw");
  mba::write_loss_trace(tm.trace, c.output_dir / "loss_trace.csv");
  if (ds.test.size() > 0) {
    const Evaluation e = evaluate(*tm.model, ds.test);
    out << "held-out ";
    print_evaluation(out, c.snr_db.front(), e);
  }
  out << "saved " << (c.output_dir / "model.irsw").string() << "\n";
  return kExitOk;
}

int cmd_eval(const ExperimentConfig& c, const std::string& model_path, std::ostream& out) {
  const std::filesystem::path path = model_path.empty() ? c.output_dir / "model.irsw" : std::filesystem::path(model_path);
  if (!std::filesystem::exists(path)) throw IoError("missing checkpoint " + path.string() + " (run `train` first)");
  mba::MbaModel model(c.model);
  model.load(path);
  const PilotSetup setup = make_pilot_setup(c);
  std::vector<ResultRow> rows;
  const mba::FlopBreakdown f = mba::flop_estimate(c.model, c.system.n_t, c.system.m(), c.system.n_subcarriers);
  for (double snr : c.snr_db) {
    const SampleSet test = evaluation_set(c, setup, snr);
    const Evaluation e = evaluate(model, test.data, c.timing);
    print_evaluation(out, snr, e);
    rows.push_back({"ls_aug", c.b, snr, e.nmse_ls, c.timing ? test.ls_time_ms : 0.0,
                    mba::ls_flop_estimate(c.system.n_t, c.b, c.system.n_subcarriers)});
    rows.push_back({"can", c.b, snr, e.nmse_can, e.ms_can, f.can_total()});
    rows.push_back({"mba", c.b, snr, e.nmse_mba, e.ms_mba, f.mba_total()});
  }
  std::filesystem::create_directories(c.output_dir);
  export_results(rows, c.output_dir / "eval.csv");
  return kExitOk;
}

int cmd_sweep(const ExperimentConfig& c, const std::string& axis_name, bool train, const std::string& out_path,
              std::ostream& out, const LogFn& log) {
  const SweepAxis axis = parse_axis(axis_name);
  const auto rows = run_sweep(c, axis, {train, log});
  const std::filesystem::path path = out_path.empty() ? c.output_dir / ("sweep_" + axis_name + ".csv") : std::filesystem::path(out_path);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  export_results(rows, path);
  out << "wrote " << rows.size() << " rows to " << path.string() << "\n";
  return kExitOk;
}

int cmd_verify(const ExperimentConfig& c, bool with_model, std::ostream& out, const LogFn& log) {
  const auto entries = verify_theory(c, {with_model, log});
  out << format_report(entries);
  const bool ok = all_passed(entries);
  out << (ok ? "verify: all checks passed\n" : "verify: FAILED\n");
  return ok ? kExitOk : kExitVerify;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"IRS cascaded channel estimation workbench"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "suppress progress output");

  auto* gen = app.add_subcommand("generate", "build and write the train/val/test dataset");
  add_common(gen, common);
  auto* psi = app.add_subcommand("design-psi", "build the pilot design and activation pattern");
  add_common(psi, common);
  auto* train = app.add_subcommand("train", "train CAN then CMN and save a checkpoint");
  add_common(train, common);
  auto* eval = app.add_subcommand("eval", "evaluate a checkpoint at each configured SNR");
  add_common(eval, common);
  std::string model_path;
  eval->add_option("--model", model_path, "checkpoint (default <output_dir>/model.irsw)");
  auto* sweep = app.add_subcommand("sweep", "NMSE table over one axis");
  add_common(sweep, common);
  std::string axis = "snr";
  bool sweep_train = false;
  std::string sweep_out;
  sweep->add_option("--axis", axis, "snr, pilots, irs_size or pattern");
  sweep->add_flag("--train", sweep_train, "train models instead of loading checkpoints");
  sweep->add_option("--out", sweep_out, "CSV path (default <output_dir>/sweep_<axis>.csv)");
  auto* verify = app.add_subcommand("verify", "run the theory checks");
  add_common(verify, common);
  bool no_model = false;
  verify->add_flag("--no-model", no_model, "skip the trained-model check");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  LogFn log;
  if (!quiet) log = [&err](const std::string& s) { err << s << "\n"; };

  try {
    const ExperimentConfig c = load_config(common.config, common.overrides);
    if (gen->parsed()) return cmd_generate(c, out);
    if (psi->parsed()) return cmd_design_psi(c, out);
    if (train->parsed()) return cmd_train(c, out, log);
    if (eval->parsed()) return cmd_eval(c, model_path, out);
    if (sweep->parsed()) return cmd_sweep(c, axis, sweep_train, sweep_out, out, log);
    if (verify->parsed()) return cmd_verify(c, !no_model, out, log);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace irsmba::harness
