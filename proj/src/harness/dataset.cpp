// SPDX-License-Identifier: Apache-2.0
#include "irsmba/harness/dataset.hpp"

#include <chrono>
#include <numeric>

#include "irsmba/channel/channel.hpp"
#include "irsmba/error.hpp"
#include "irsmba/harness/container.hpp"
#include "irsmba/ls/ls.hpp"

namespace irsmba::harness {

using tensor::Tensor;

PilotSetup make_pilot_setup(const ExperimentConfig& config) {
  const auto& sys = config.system;
  Rng pattern_rng(derive_seed(config.seed, stream::pattern, 0));
  PilotSetup s;
  s.pattern = pilot::make_pattern(config.pattern, sys.irs_rows, sys.irs_cols, config.b, pattern_rng);
  switch (config.psi) {
    case PsiKind::dft:
      s.base = pilot::dft_matrix(config.b);
      break;
    case PsiKind::hadamard:
      s.base = pilot::hadamard_matrix(config.b);
      break;
    case PsiKind::random_unimodular: {
      Rng psi_rng(derive_seed(config.seed, stream::psi, 0));
      s.base = pilot::random_unimodular(config.b, config.b, psi_rng);
      break;
    }
    case PsiKind::quantized:
      s.base = pilot::quantize_phases(pilot::dft_matrix(config.b), config.psi_bits);
      break;
  }
  s.psi = pilot::reduce_psi(s.base, s.pattern);
  return s;
}

void write_complex(const ComplexMatrix& h, double* dst) {
  const std::size_t n = h.size();
  for (std::size_t i = 0; i < n; ++i) {
    dst[i] = h.data()[i].real();
    dst[n + i] = h.data()[i].imag();
  }
}

ComplexMatrix read_complex(const double* src, std::size_t n_t, std::size_t m) {
  ComplexMatrix h(n_t, m);
  const std::size_t n = n_t * m;
  for (std::size_t i = 0; i < n; ++i) h.data()[i] = cplx(src[i], src[n + i]);
  return h;
}

SampleSet generate_samples(const ExperimentConfig& config, const PilotSetup& setup, const std::vector<double>& snr_list,
                           std::size_t count, std::uint64_t index_base, bool keep_channels) {
  if (snr_list.empty()) throw PreconditionError("generate_samples: empty SNR list");
  if (count == 0) throw PreconditionError("generate_samples: zero samples requested");
  const auto& sys = config.system;
  const std::size_t nt = sys.n_t, m = sys.m(), k = sys.n_subcarriers;
  const std::size_t per = 2 * nt * m;
  SampleSet out;
  out.data.inputs = Tensor({count, 2, nt, m});
  out.data.targets = Tensor({count, 2, nt, m});
  out.snr_db.reserve(count);
  const std::size_t realizations = (count + k - 1) / k;
  std::size_t s = 0;
  for (std::size_t r = 0; r < realizations; ++r) {
    Rng ch_rng(derive_seed(config.seed, stream::channel, index_base + r));
    Rng noise_rng(derive_seed(config.seed, stream::noise, index_base + r));
    const double snr = snr_list[r % snr_list.size()];
    const double sigma2 = ls::noise_variance_for_snr(snr, sys.pilot_power);
    const channel::ChannelRealization real = channel::draw_realization(sys, ch_rng);
    for (std::size_t kk = 0; kk < k && s < count; ++kk, ++s) {
      const auto t0 = std::chrono::steady_clock::now();
      const ls::EstimateRecord rec =
          ls::estimate_reduced(real.h_cs[kk], setup.psi, setup.pattern, sigma2, sys.pilot_power, noise_rng);
      out.ls_time_ms += std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      write_complex(rec.h_aug, out.data.inputs.storage().data() + s * per);
      write_complex(rec.h_true, out.data.targets.storage().data() + s * per);
      out.snr_db.push_back(snr);
      if (keep_channels) out.channels.push_back(real.h_cs[kk]);
    }
  }
  return out;
}

namespace {

mba::Dataset take(const mba::Dataset& all, const std::vector<std::size_t>& order, std::size_t begin, std::size_t end) {
  mba::Dataset d;
  if (end == begin) return d;
  tensor::Shape dims = all.inputs.dims();
  const std::size_t per = all.inputs.size() / dims[0];
  dims[0] = end - begin;
  d.inputs = Tensor(dims);
  d.targets = Tensor(dims);
  for (std::size_t i = begin; i < end; ++i) {
    const std::size_t src = order[i] * per, dst = (i - begin) * per;
    std::copy_n(all.inputs.storage().begin() + static_cast<std::ptrdiff_t>(src), per,
                d.inputs.storage().begin() + static_cast<std::ptrdiff_t>(dst));
    std::copy_n(all.targets.storage().begin() + static_cast<std::ptrdiff_t>(src), per,
                d.targets.storage().begin() + static_cast<std::ptrdiff_t>(dst));
  }
  return d;
}

}  // namespace

SplitDataset build_dataset(const ExperimentConfig& config, const PilotSetup& setup) {
  const std::size_t total = config.train_samples + config.val_samples + config.test_samples;
  SampleSet all = generate_samples(config, setup, config.snr_db, total, 0, config.dump_channels);
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(derive_seed(config.seed, stream::shuffle, 0));
  for (std::size_t i = total - 1; i > 0; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i);
    std::swap(order[i], order[pick(rng)]);
  }
  SplitDataset out;
  const std::size_t a = config.train_samples, b = a + config.val_samples;
  out.train = take(all.data, order, 0, a);
  out.val = take(all.data, order, a, b);
  out.test = take(all.data, order, b, total);
  out.channels = std::move(all.channels);
  return out;
}

void write_dataset(const std::filesystem::path& dir, const SplitDataset& ds, const PilotSetup& setup) {
  std::filesystem::create_directories(dir);
  auto put = [&](const std::string& split, const mba::Dataset& d) {
    if (d.size() == 0) return;
    write_tensor(dir / (split + "_input.irst"), d.inputs);
    write_tensor(dir / (split + "_target.irst"), d.targets);
  };
  put("train", ds.train);
  put("val", ds.val);
  put("test", ds.test);
  pilot::export_pattern(setup.pattern, dir / "pattern.txt");
  if (!ds.channels.empty()) {
    std::vector<Record> recs;
    recs.reserve(ds.channels.size());
    for (const auto& h : ds.channels) {
      Tensor t({h.rows(), h.cols(), 2});
      for (std::size_t i = 0; i < h.size(); ++i) {
        t[2 * i] = h.data()[i].real();
        t[2 * i + 1] = h.data()[i].imag();
      }
      recs.push_back({DType::f64, std::move(t)});
    }
    write_records(dir / "channels.irst", recs);
  }
}

mba::Dataset read_split(const std::filesystem::path& dir, const std::string& split) {
  mba::Dataset d;
  d.inputs = read_tensor(dir / (split + "_input.irst"));
  d.targets = read_tensor(dir / (split + "_target.irst"));
  d.validate();
  return d;
}

}  // namespace irsmba::harness
