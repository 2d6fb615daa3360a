// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "irsmba/error.hpp"
#include "irsmba/harness/cli.hpp"
#include "irsmba/harness/config.hpp"
#include "irsmba/harness/container.hpp"
#include "irsmba/harness/dataset.hpp"
#include "irsmba/harness/experiment.hpp"
#include "irsmba/harness/results.hpp"
#include "irsmba/harness/verify.hpp"
#include "irsmba/ls/ls.hpp"

using namespace irsmba;
using namespace irsmba::harness;
namespace fs = std::filesystem;

namespace {

const char* kTiny = R"(
# tiny system for fast runs
seed = 11
n_t = 2
irs_rows = 2
irs_cols = 4
n_subcarriers = 4
l_bs_irs = 2
l_mu_irs = 2
pattern = proposed
b = 4
snr_db = 10
train_samples = 32
val_samples = 8
test_samples = 8
width = 3
attention_dim = 2
epochs_can = 2
epochs_cmn = 2
batch_size = 8
lr_can = 1e-3
lr_cmn = 1e-3
sweep_b = 2, 4
sweep_snr_db = 0, 20
verify_draws = 2000
verify_random_designs = 50
)";

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("irsmba_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

fs::path write_config(const fs::path& dir, const std::string& extra = "") {
  const fs::path p = dir / "tiny.cfg";
  std::ofstream(p) << kTiny << "output_dir = " << (dir / "out").string() << "\n" << extra;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(Config, ParsesValuesAndComments) {
  const ExperimentConfig c = config_from_text(kTiny);
  EXPECT_EQ(c.seed, 11u);
  EXPECT_EQ(c.system.m(), 8u);
  EXPECT_EQ(c.b, 4u);
  EXPECT_EQ(c.sweep_b, (std::vector<std::size_t>{2, 4}));
  EXPECT_EQ(c.sweep_snr_db, (std::vector<double>{0.0, 20.0}));
  EXPECT_DOUBLE_EQ(c.lr_can, 1e-3);
  const auto kv = parse_key_values("a = 1 # trailing\n\n# whole line\nb=2\na = 3\n");
  EXPECT_EQ(kv.at("a"), "3");
  EXPECT_EQ(kv.at("b"), "2");
}

TEST(Config, OverridesAndCanonicalRoundTrip) {
  const ExperimentConfig c = config_from_text(kTiny, {"b=2", "snr_db=0,5"});
  EXPECT_EQ(c.b, 2u);
  EXPECT_EQ(c.snr_db, (std::vector<double>{0.0, 5.0}));
  const std::string text = format_config(c);
  EXPECT_EQ(format_config(config_from_text(text)), text);
}

TEST(Config, RejectsBadInput) {
  EXPECT_THROW(config_from_text("n_t = 2\n"), ConfigError);  // no seed
  EXPECT_THROW(config_from_text(kTiny, {"bogus=1"}), ConfigError);
  EXPECT_THROW(config_from_text(kTiny, {"b=9"}), ConfigError);
  EXPECT_THROW(config_from_text(kTiny, {"n_t=-1"}), ConfigError);
  EXPECT_THROW(config_from_text(kTiny, {"lr_can=abc"}), ConfigError);
  EXPECT_THROW(config_from_text(kTiny, {"pattern=diagonal"}), ConfigError);
  EXPECT_THROW(config_from_text(kTiny, {"psi=hadamard", "b=3"}), ConfigError);
  EXPECT_THROW(config_from_text(kTiny, {"pattern=column", "b=3"}), ConfigError);
  EXPECT_THROW(config_from_text(kTiny, {"noise_variance=0"}), ConfigError);
  EXPECT_THROW(config_from_text(kTiny, {"timing=maybe"}), ConfigError);
  EXPECT_THROW(config_from_text(kTiny, {"sweep_irs_size=4by4"}), ConfigError);
  EXPECT_THROW(config_from_text("seed = 1\nno equals sign\n"), ConfigError);
  EXPECT_THROW(config_from_text(kTiny, {"novalue"}), ConfigError);
}

TEST(Container, ByteLayout) {
  const tensor::Tensor t({2}, {1.0, -2.0});
  const auto bytes = encode_records({{DType::f64, t}});
  ASSERT_EQ(bytes.size(), 4u + 2 + 1 + 1 + 4 + 16);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "IRST");
  EXPECT_EQ(bytes[4], 1);
  EXPECT_EQ(bytes[5], 0);
  EXPECT_EQ(bytes[6], 1);  // f64
  EXPECT_EQ(bytes[7], 1);  // ndim
  EXPECT_EQ(bytes[8], 2);
  EXPECT_EQ(bytes[9] | bytes[10] | bytes[11], 0);
  double v;
  std::memcpy(&v, bytes.data() + 20, 8);
  EXPECT_EQ(v, -2.0);
  // 1.0 = 0x3FF0000000000000, little-endian
  EXPECT_EQ(bytes[12 + 7], 0x3F);
  EXPECT_EQ(bytes[12 + 6], 0xF0);
}

TEST(Container, RoundTripAndF32Widening) {
  const tensor::Tensor a({2, 3}, {1, 2, 3, 4, 5, 6.5});
  const tensor::Tensor b({1, 1, 2}, {0.1, -0.0});
  const auto recs = decode_records(encode_records({{DType::f64, a}, {DType::f32, b}}));
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0].tensor, a);
  EXPECT_EQ(recs[1].dtype, DType::f32);
  EXPECT_EQ(recs[1].tensor.dims(), b.dims());
  EXPECT_EQ(recs[1].tensor[0], static_cast<double>(0.1f));
  EXPECT_TRUE(std::signbit(recs[1].tensor[1]));
}

TEST(Container, CorruptInputRejected) {
  auto bytes = encode_records({{DType::f64, tensor::Tensor({3}, {1, 2, 3})}});
  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  EXPECT_THROW(decode_records(bad_magic), IoError);
  auto truncated = bytes;
  truncated.pop_back();
  EXPECT_THROW(decode_records(truncated), IoError);
  auto bad_version = bytes;
  bad_version[4] = 9;
  EXPECT_THROW(decode_records(bad_version), IoError);
  EXPECT_THROW(read_tensor("/nonexistent/x.irst"), IoError);
}

TEST(Results, RoundTripIsBitExact) {
  std::vector<ResultRow> rows;
  Rng rng(71);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  const char* methods[] = {"ls_aug", "can", "mba"};
  for (std::size_t i = 0; i < 10000; ++i) rows.push_back({methods[i % 3], i % 97, u(rng), std::abs(u(rng)) * 1e-9, 0.0, u(rng) * 1e9});
  const std::string text = format_results(rows);
  EXPECT_EQ(text.substr(0, text.find('\n')), kResultHeader);
  EXPECT_EQ(parse_results(text), rows);
  EXPECT_THROW(parse_results("method,b\nmba,1\n"), IoError);
  EXPECT_THROW(parse_results(std::string(kResultHeader) + "\nmba,x,1,1,1,1\n"), IoError);
}

TEST(Dataset, CountsAndDeterminism) {
  const ExperimentConfig c = config_from_text(kTiny);
  const PilotSetup setup = make_pilot_setup(c);
  const SampleSet a = generate_samples(c, setup, {10.0, 20.0}, 10, 0);
  const SampleSet b = generate_samples(c, setup, {10.0, 20.0}, 10, 0);
  EXPECT_EQ(a.data.inputs.dims(), (tensor::Shape{10, 2, 2, 8}));
  EXPECT_EQ(a.data.inputs, b.data.inputs);
  EXPECT_EQ(a.data.targets, b.data.targets);
  // realization-major: K = 4 subcarriers per realization, SNR cycles per realization
  EXPECT_EQ(a.snr_db, (std::vector<double>{10, 10, 10, 10, 20, 20, 20, 20, 10, 10}));
  const SampleSet e = generate_samples(c, setup, {10.0}, 4, kEvalIndexBase);
  EXPECT_NE(e.data.targets, generate_samples(c, setup, {10.0}, 4, 0).data.targets);
}

TEST(Dataset, PrefixStable) {
  const ExperimentConfig c = config_from_text(kTiny);
  const PilotSetup setup = make_pilot_setup(c);
  const SampleSet small = generate_samples(c, setup, {10.0}, 6, 0);
  const SampleSet big = generate_samples(c, setup, {10.0}, 12, 0);
  for (std::size_t i = 0; i < small.data.targets.size(); ++i) EXPECT_EQ(small.data.targets[i], big.data.targets[i]);
}

TEST(Dataset, InputsAreZeroFilledAtInactiveElements) {
  const ExperimentConfig c = config_from_text(kTiny);
  const PilotSetup setup = make_pilot_setup(c);
  const SampleSet s = generate_samples(c, setup, {10.0}, 8, 0);
  const std::size_t nt = 2, m = 8;
  for (std::size_t i = 0; i < 8; ++i) {
    const ComplexMatrix h = read_complex(s.data.inputs.storage().data() + i * 2 * nt * m, nt, m);
    for (std::size_t r = 0; r < setup.pattern.rows; ++r)
      for (std::size_t col = 0; col < setup.pattern.cols; ++col)
        if (!setup.pattern.active(r, col)) {
          for (std::size_t a = 0; a < nt; ++a) EXPECT_EQ(h(a, r * setup.pattern.cols + col), cplx{});
        }
  }
}

TEST(Dataset, FullActivationAtVanishingNoiseIsExact) {
  ExperimentConfig c = config_from_text(kTiny, {"b=8", "pattern=column"});
  const PilotSetup setup = make_pilot_setup(c);
  const SampleSet s = generate_samples(c, setup, {300.0}, 8, 0);
  EXPECT_LT(mba::tensor_nmse(s.data.targets, s.data.inputs), 1e-20);
}

TEST(Dataset, ComplexLayoutRoundTrip) {
  ComplexMatrix h(2, 3);
  for (std::size_t i = 0; i < 6; ++i) h.data()[i] = cplx(static_cast<double>(i), -static_cast<double>(i) - 0.5);
  std::vector<double> buf(12);
  write_complex(h, buf.data());
  EXPECT_EQ(buf[1], 1.0);
  EXPECT_EQ(buf[6 + 1], -1.5);
  EXPECT_EQ(read_complex(buf.data(), 2, 3), h);
}

TEST(Dataset, SplitsAndFiles) {
  TempDir tmp("dataset");
  ExperimentConfig c = config_from_text(kTiny, {"dump_channels=true"});
  const PilotSetup setup = make_pilot_setup(c);
  const SplitDataset ds = build_dataset(c, setup);
  EXPECT_EQ(ds.train.size(), 32u);
  EXPECT_EQ(ds.val.size(), 8u);
  EXPECT_EQ(ds.test.size(), 8u);
  EXPECT_EQ(ds.channels.size(), 48u);
  write_dataset(tmp.path, ds, setup);
  const mba::Dataset back = read_split(tmp.path, "test");
  EXPECT_EQ(back.inputs, ds.test.inputs);
  EXPECT_EQ(back.targets, ds.test.targets);
  EXPECT_TRUE(fs::exists(tmp.path / "pattern.txt"));
  EXPECT_EQ(read_records(tmp.path / "channels.irst").size(), 48u);
}

TEST(Verify, TheoryChecksPassWithoutModel) {
  ExperimentConfig c = config_from_text(kTiny, {"verify_draws=10000", "verify_random_designs=200"});
  VerifyOptions o;
  o.train_model = false;
  const auto entries = verify_theory(c, o);
  EXPECT_TRUE(all_passed(entries)) << format_report(entries);
  EXPECT_NE(format_report(entries).find("PASS"), std::string::npos);
}

TEST(Verify, LinearFitRecoversSlope) {
  const LinearFit fit = linear_in_m({4, 8, 16, 32}, 2, 0.5, 4000, 3);
  EXPECT_NEAR(fit.slope, 1.0, 0.05);
  EXPECT_EQ(fit.m.size(), 4u);
}

TEST(Cli, ExitCodes) {
  TempDir tmp("cli_codes");
  const fs::path cfg = write_config(tmp.path);
  EXPECT_EQ(cli({}).code, kExitConfig);
  EXPECT_EQ(cli({"--help"}).code, kExitOk);
  EXPECT_EQ(cli({"frobnicate"}).code, kExitConfig);
  EXPECT_EQ(cli({"design-psi"}).code, kExitConfig);  // missing --config
  EXPECT_EQ(cli({"design-psi", "--config", (tmp.path / "missing.cfg").string()}).code, kExitIo);
  const CliResult bad = cli({"design-psi", "--config", cfg.string(), "--set", "b=99"});
  EXPECT_EQ(bad.code, kExitConfig);
  EXPECT_NE(bad.err.find("config error"), std::string::npos) << bad.err;
  EXPECT_EQ(cli({"eval", "-q", "--config", cfg.string()}).code, kExitIo);
  EXPECT_EQ(cli({"sweep", "-q", "--config", cfg.string(), "--axis", "diagonal"}).code, kExitConfig);
}

TEST(Cli, DesignPsiWritesArtifacts) {
  TempDir tmp("cli_psi");
  const fs::path cfg = write_config(tmp.path);
  const CliResult r = cli({"design-psi", "-q", "--config", cfg.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto recs = read_records(tmp.path / "out" / "psi.irst");
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0].tensor.dims(), (tensor::Shape{4, 4, 2}));
  EXPECT_EQ(recs[1].tensor.dims(), (tensor::Shape{8, 4, 2}));
  EXPECT_EQ(slurp(tmp.path / "out" / "pattern.txt").substr(0, 27), "# pattern kind=proposed b=4");
}

TEST(Cli, GenerateTrainEvalPipeline) {
  TempDir tmp("cli_pipeline");
  const fs::path cfg = write_config(tmp.path);
  ASSERT_EQ(cli({"generate", "-q", "--config", cfg.string()}).code, kExitOk);
  EXPECT_TRUE(fs::exists(tmp.path / "out" / "data" / "train_input.irst"));
  const CliResult t = cli({"train", "-q", "--config", cfg.string()});
  ASSERT_EQ(t.code, kExitOk) << t.err;
  EXPECT_TRUE(fs::exists(tmp.path / "out" / "model.irsw"));
  const std::string trace = slurp(tmp.path / "out" / "loss_trace.csv");
  EXPECT_EQ(trace.substr(0, trace.find('\n')), "epoch,stage,train_loss,val_nmse");
  const CliResult e = cli({"eval", "-q", "--config", cfg.string()});
  ASSERT_EQ(e.code, kExitOk) << e.err;
  const auto rows = read_results(tmp.path / "out" / "eval.csv");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].method, "ls_aug");
  EXPECT_EQ(rows[2].method, "mba");
  for (const auto& row : rows) {
    EXPECT_EQ(row.b, 4u);
    EXPECT_GT(row.nmse, 0.0);
    EXPECT_EQ(row.wall_time_ms, 0.0);
  }
}

TEST(Cli, SweepIsDeterministic) {
  TempDir a("cli_sweep_a"), b("cli_sweep_b");
  const fs::path ca = write_config(a.path), cb = write_config(b.path);
  ASSERT_EQ(cli({"sweep", "-q", "--config", ca.string(), "--axis", "pilots", "--train"}).code, kExitOk);
  ASSERT_EQ(cli({"sweep", "-q", "--config", cb.string(), "--axis", "pilots", "--train"}).code, kExitOk);
  const std::string ta = slurp(a.path / "out" / "sweep_pilots.csv");
  EXPECT_EQ(ta, slurp(b.path / "out" / "sweep_pilots.csv"));
  const auto rows = parse_results(ta);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0].b, 2u);
  EXPECT_EQ(rows[3].b, 4u);
  // a second run reuses the checkpoints
  ASSERT_EQ(cli({"sweep", "-q", "--config", ca.string(), "--axis", "pilots"}).code, kExitOk);
  EXPECT_EQ(slurp(a.path / "out" / "sweep_pilots.csv"), ta);
}

TEST(Cli, VerifyWithoutModel) {
  TempDir tmp("cli_verify");
  const fs::path cfg = write_config(tmp.path, "verify_draws = 10000\n");
  const CliResult r = cli({"verify", "-q", "--no-model", "--config", cfg.string()});
  EXPECT_EQ(r.code, kExitOk) << r.out << r.err;
  EXPECT_NE(r.out.find("trace_formula_m8"), std::string::npos);
}
