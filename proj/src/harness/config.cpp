// SPDX-License-Identifier: Apache-2.0
#include "irsmba/harness/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "irsmba/binary_io.hpp"
#include "irsmba/error.hpp"

namespace irsmba::harness {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_real(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end || !std::isfinite(out)) throw ConfigError(key + ": '" + v + "' is not a finite number");
  return out;
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) throw ConfigError(key + ": '" + v + "' is not a non-negative integer");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key + ": '" + v + "' is not a boolean");
}

std::string fmt_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T, typename F>
std::string join(const std::vector<T>& xs, F&& f) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    out += f(xs[i]);
  }
  return out;
}

PsiKind parse_psi(const std::string& v) {
  if (v == "dft") return PsiKind::dft;
  if (v == "hadamard") return PsiKind::hadamard;
  if (v == "random_unimodular") return PsiKind::random_unimodular;
  if (v == "quantized") return PsiKind::quantized;
  throw ConfigError("psi: '" + v + "' (expected dft, hadamard, random_unimodular or quantized)");
}

GridSize parse_grid(const std::string& key, const std::string& v) {
  const auto x = v.find('x');
  if (x == std::string::npos) throw ConfigError(key + ": '" + v + "' is not of the form <rows>x<cols>");
  return {to_uint(key, v.substr(0, x)), to_uint(key, v.substr(x + 1))};
}

struct Field {
  std::function<void(ExperimentConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

template <typename M>
Field real_field(M member) {
  return {[member](ExperimentConfig& c, const std::string& k, const std::string& v) { c.*member = to_real(k, v); },
          [member](const ExperimentConfig& c) { return fmt_real(c.*member); }};
}

template <typename Acc>
Field real_at(Acc acc) {
  return {[acc](ExperimentConfig& c, const std::string& k, const std::string& v) { acc(c) = to_real(k, v); },
          [acc](const ExperimentConfig& c) { return fmt_real(acc(const_cast<ExperimentConfig&>(c))); }};
}

template <typename Acc>
Field size_at(Acc acc) {
  return {[acc](ExperimentConfig& c, const std::string& k, const std::string& v) {
            acc(c) = static_cast<std::remove_reference_t<decltype(acc(c))>>(to_uint(k, v));
          },
          [acc](const ExperimentConfig& c) { return std::to_string(acc(const_cast<ExperimentConfig&>(c))); }};
}

template <typename Acc>
Field bool_at(Acc acc) {
  return {[acc](ExperimentConfig& c, const std::string& k, const std::string& v) { acc(c) = to_bool(k, v); },
          [acc](const ExperimentConfig& c) { return std::string(acc(const_cast<ExperimentConfig&>(c)) ? "true" : "false"); }};
}

#define ACC(expr) [](ExperimentConfig& c) -> auto& { return expr; }

void add_angles(std::map<std::string, Field>& f, const std::string& prefix, channel::LinkAngles channel::SystemConfig::*link) {
  f[prefix + "irs_azimuth_mean"] = real_at([link](ExperimentConfig& c) -> double& { return (c.system.*link).irs_azimuth_mean; });
  f[prefix + "irs_azimuth_spread"] = real_at([link](ExperimentConfig& c) -> double& { return (c.system.*link).irs_azimuth_spread; });
  f[prefix + "irs_elevation_mean"] = real_at([link](ExperimentConfig& c) -> double& { return (c.system.*link).irs_elevation_mean; });
  f[prefix + "irs_elevation_spread"] =
      real_at([link](ExperimentConfig& c) -> double& { return (c.system.*link).irs_elevation_spread; });
  f[prefix + "bs_azimuth_mean"] = real_at([link](ExperimentConfig& c) -> double& { return (c.system.*link).bs_azimuth_mean; });
  f[prefix + "bs_azimuth_spread"] = real_at([link](ExperimentConfig& c) -> double& { return (c.system.*link).bs_azimuth_spread; });
}

const std::map<std::string, Field>& fields() {
  static const std::map<std::string, Field> table = [] {
    std::map<std::string, Field> f;
    f["n_t"] = size_at(ACC(c.system.n_t));
    f["irs_rows"] = size_at(ACC(c.system.irs_rows));
    f["irs_cols"] = size_at(ACC(c.system.irs_cols));
    f["n_subcarriers"] = size_at(ACC(c.system.n_subcarriers));
    f["sampling_rate"] = real_at(ACC(c.system.sampling_rate));
    f["carrier_freq"] = real_at(ACC(c.system.carrier_freq));
    f["l_bs_irs"] = size_at(ACC(c.system.l_bs_irs));
    f["l_mu_irs"] = size_at(ACC(c.system.l_mu_irs));
    f["noise_variance"] = real_at(ACC(c.system.noise_variance));
    f["pilot_power"] = real_at(ACC(c.system.pilot_power));
    f["delay_scaling"] = real_at(ACC(c.system.delay_scaling));
    f["ds_mu_slope"] = real_at(ACC(c.system.delay_spread.mu_slope));
    f["ds_mu_offset"] = real_at(ACC(c.system.delay_spread.mu_offset));
    f["ds_sigma_slope"] = real_at(ACC(c.system.delay_spread.sigma_slope));
    f["ds_sigma_offset"] = real_at(ACC(c.system.delay_spread.sigma_offset));
    f["path_power"] = {[](ExperimentConfig& c, const std::string& k, const std::string& v) {
                         if (v == "unit_sum") c.system.path_power = channel::PathPower::unit_sum;
                         else if (v == "unit_mean") c.system.path_power = channel::PathPower::unit_mean;
                         else throw ConfigError(k + ": '" + v + "' (expected unit_sum or unit_mean)");
                       },
                       [](const ExperimentConfig& c) {
                         return std::string(c.system.path_power == channel::PathPower::unit_sum ? "unit_sum" : "unit_mean");
                       }};
    add_angles(f, "bs_irs_", &channel::SystemConfig::bs_irs_angles);
    add_angles(f, "mu_irs_", &channel::SystemConfig::mu_irs_angles);

    f["pattern"] = {[](ExperimentConfig& c, const std::string&, const std::string& v) {
                      try {
                        c.pattern = pilot::parse_pattern_kind(v);
                      } catch (const PreconditionError& e) {
                        throw ConfigError(std::string("pattern: ") + e.what());
                      }
                    },
                    [](const ExperimentConfig& c) { return pilot::to_string(c.pattern); }};
    f["b"] = size_at(ACC(c.b));
    f["psi"] = {[](ExperimentConfig& c, const std::string&, const std::string& v) { c.psi = parse_psi(v); },
                [](const ExperimentConfig& c) { return to_string(c.psi); }};
    f["psi_bits"] = size_at(ACC(c.psi_bits));
    f["snr_db"] = {[](ExperimentConfig& c, const std::string& k, const std::string& v) {
                     c.snr_db.clear();
                     for (const auto& s : split_list(v)) c.snr_db.push_back(to_real(k, s));
                   },
                   [](const ExperimentConfig& c) { return join(c.snr_db, fmt_real); }};
    f["train_samples"] = size_at(ACC(c.train_samples));
    f["val_samples"] = size_at(ACC(c.val_samples));
    f["test_samples"] = size_at(ACC(c.test_samples));
    f["seed"] = size_at(ACC(c.seed));
    f["width"] = size_at(ACC(c.model.width));
    f["attention_dim"] = size_at(ACC(c.model.attention_dim));
    f["epochs_can"] = size_at(ACC(c.epochs_can));
    f["epochs_cmn"] = size_at(ACC(c.epochs_cmn));
    f["batch_size"] = size_at(ACC(c.batch_size));
    f["lr_can"] = real_at(ACC(c.lr_can));
    f["lr_can_decay"] = real_at(ACC(c.lr_can_decay));
    f["lr_can_interval"] = size_at(ACC(c.lr_can_interval));
    f["lr_cmn"] = real_at(ACC(c.lr_cmn));
    f["sweep_snr_db"] = {[](ExperimentConfig& c, const std::string& k, const std::string& v) {
                           c.sweep_snr_db.clear();
                           for (const auto& s : split_list(v)) c.sweep_snr_db.push_back(to_real(k, s));
                         },
                         [](const ExperimentConfig& c) { return join(c.sweep_snr_db, fmt_real); }};
    f["sweep_b"] = {[](ExperimentConfig& c, const std::string& k, const std::string& v) {
                      c.sweep_b.clear();
                      for (const auto& s : split_list(v)) c.sweep_b.push_back(to_uint(k, s));
                    },
                    [](const ExperimentConfig& c) {
                      return join(c.sweep_b, [](std::size_t x) { return std::to_string(x); });
                    }};
    f["sweep_irs_size"] = {[](ExperimentConfig& c, const std::string& k, const std::string& v) {
                             c.sweep_irs_size.clear();
                             for (const auto& s : split_list(v)) c.sweep_irs_size.push_back(parse_grid(k, s));
                           },
                           [](const ExperimentConfig& c) {
                             return join(c.sweep_irs_size, [](const GridSize& g) {
                               return std::to_string(g.rows) + "x" + std::to_string(g.cols);
                             });
                           }};
    f["sweep_pattern"] = {[](ExperimentConfig& c, const std::string& k, const std::string& v) {
                            c.sweep_pattern.clear();
                            for (const auto& s : split_list(v)) {
                              try {
                                c.sweep_pattern.push_back(pilot::parse_pattern_kind(s));
                              } catch (const PreconditionError& e) {
                                throw ConfigError(k + ": " + e.what());
                              }
                            }
                          },
                          [](const ExperimentConfig& c) {
                            return join(c.sweep_pattern, [](pilot::PatternKind p) { return pilot::to_string(p); });
                          }};
    f["verify_draws"] = size_at(ACC(c.verify_draws));
    f["verify_random_designs"] = size_at(ACC(c.verify_random_designs));
    f["timing"] = bool_at(ACC(c.timing));
    f["dump_channels"] = bool_at(ACC(c.dump_channels));
    f["output_dir"] = {[](ExperimentConfig& c, const std::string&, const std::string& v) { c.output_dir = v; },
                       [](const ExperimentConfig& c) { return c.output_dir.string(); }};
    return f;
  }();
  return table;
}

#undef ACC

}  // namespace

std::string to_string(PsiKind k) {
  switch (k) {
    case PsiKind::dft:
      return "dft";
    case PsiKind::hadamard:
      return "hadamard";
    case PsiKind::random_unimodular:
      return "random_unimodular";
    case PsiKind::quantized:
      return "quantized";
  }
  return "unknown";
}

mba::TrainConfig ExperimentConfig::train_config(mba::Stage s) const {
  mba::TrainConfig t;
  t.batch_size = batch_size;
  t.seed = derive_seed(seed, stream::training, s == mba::Stage::can ? 0 : 1);
  if (s == mba::Stage::can) {
    t.epochs = epochs_can;
    t.schedule = {lr_can, lr_can_decay, lr_can_interval, tensor::LrSchedule::Mode::stepped};
  } else {
    t.epochs = epochs_cmn;
    t.schedule = tensor::LrSchedule::constant(lr_cmn);
  }
  t.adam.learning_rate = t.schedule.initial_rate;
  return t;
}

void ExperimentConfig::validate() const {
  try {
    system.validate();
  } catch (const PreconditionError& e) {
    throw ConfigError(e.what());
  }
  const std::size_t m = system.m();
  if (b < 1 || b > m) throw ConfigError("b = " + std::to_string(b) + " must lie in [1, M = " + std::to_string(m) + "]");
  if (pattern == pilot::PatternKind::column && b % system.irs_rows != 0) {
    throw ConfigError("column pattern needs b divisible by irs_rows");
  }
  if (pattern == pilot::PatternKind::row && b % system.irs_cols != 0) {
    throw ConfigError("row pattern needs b divisible by irs_cols");
  }
  if (psi == PsiKind::hadamard && (b & (b - 1)) != 0) {
    throw ConfigError("psi = hadamard needs b to be a power of two; use psi = dft");
  }
  if (psi == PsiKind::quantized && (psi_bits < 1 || psi_bits > 30)) throw ConfigError("psi_bits must be in [1, 30]");
  if (snr_db.empty()) throw ConfigError("snr_db must list at least one value");
  if (train_samples == 0 || test_samples == 0) throw ConfigError("train_samples and test_samples must be positive");
  if (model.width == 0 || model.attention_dim == 0) throw ConfigError("width and attention_dim must be positive");
  if (batch_size == 0) throw ConfigError("batch_size must be positive");
  if (!(lr_can > 0.0) || !(lr_cmn > 0.0)) throw ConfigError("learning rates must be positive");
  if (!(lr_can_decay > 0.0 && lr_can_decay <= 1.0)) throw ConfigError("lr_can_decay must be in (0, 1]");
  if (lr_can_interval == 0) throw ConfigError("lr_can_interval must be positive");
}

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::stringstream ss(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

void apply_settings(ExperimentConfig& config, const std::map<std::string, std::string>& kv) {
  const auto& table = fields();
  for (const auto& [k, v] : kv) {
    auto it = table.find(k);
    if (it == table.end()) throw ConfigError("unknown config key '" + k + "'");
    it->second.set(config, k, v);
  }
}

ExperimentConfig config_from_text(const std::string& text, const std::vector<std::string>& overrides) {
  auto kv = parse_key_values(text);
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + o + "' is not key=value");
    kv[trim(o.substr(0, eq))] = trim(o.substr(eq + 1));
  }
  if (!kv.contains("seed")) throw ConfigError("config must set 'seed'");
  ExperimentConfig c;
  apply_settings(c, kv);
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  const auto bytes = io::read_file(path);
  return config_from_text(std::string(bytes.begin(), bytes.end()), overrides);
}

std::string format_config(const ExperimentConfig& config) {
  std::string out;
  for (const auto& [k, f] : fields()) out += k + " = " + f.get(config) + "\n";
  return out;
}

}  // namespace irsmba::harness
