// SPDX-License-Identifier: Apache-2.0
#include "irsmba/pilot/pilot.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>

#include "irsmba/error.hpp"

namespace irsmba::pilot {

namespace {
constexpr double kPi = std::numbers::pi;
}

std::string to_string(PatternKind kind) {
  switch (kind) {
    case PatternKind::column:
      return "column";
    case PatternKind::row:
      return "row";
    case PatternKind::random:
      return "random";
    case PatternKind::proposed:
      return "proposed";
  }
  return "unknown";
}

PatternKind parse_pattern_kind(const std::string& name) {
  if (name == "column") return PatternKind::column;
  if (name == "row") return PatternKind::row;
  if (name == "random") return PatternKind::random;
  if (name == "proposed") return PatternKind::proposed;
  throw PreconditionError("unknown pattern kind '" + name + "' (expected column, row, random or proposed)");
}

std::size_t ActivationPattern::active_count() const {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true));
}

std::vector<std::size_t> ActivationPattern::active_indices() const {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) idx.push_back(i);
  }
  return idx;
}

PhaseMatrix dft_matrix(std::size_t n) {
  if (n == 0) throw DimensionError("dft_matrix: n must be >= 1");
  PhaseMatrix out{ComplexMatrix(n, n), Construction::dft, 0};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      // Reduce i*k mod n first so large orders keep full phase accuracy.
      const double frac = static_cast<double>((i * k) % n) / static_cast<double>(n);
      out.psi(i, k) = std::polar(1.0, -2.0 * kPi * frac);
    }
  }
  return out;
}

PhaseMatrix hadamard_matrix(std::size_t n) {
  if (n == 0 || (n & (n - 1)) != 0) {
    std::ostringstream msg;
    msg << "hadamard_matrix: order " << n << " is not a power of two; use the DFT design for this size";
    throw PreconditionError(msg.str());
  }
  PhaseMatrix out{ComplexMatrix(n, n), Construction::hadamard, 0};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) out.psi(i, k) = (std::popcount(i & k) % 2 == 0) ? 1.0 : -1.0;
  }
  return out;
}

PhaseMatrix random_unimodular(std::size_t m, std::size_t b, Rng& rng) {
  if (m == 0 || b == 0) throw DimensionError("random_unimodular: m and b must be >= 1");
  PhaseMatrix out{ComplexMatrix(m, b), Construction::random_unimodular, 0};
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  for (cplx& v : out.psi.data()) v = std::polar(1.0, phase(rng));
  return out;
}

PhaseMatrix quantize_phases(const PhaseMatrix& psi, unsigned bits) {
  if (bits == 0 || bits > 30) throw PreconditionError("quantize_phases: bits must be in [1, 30]");
  const double levels = static_cast<double>(1u << bits);
  const double step = 2.0 * kPi / levels;
  PhaseMatrix out{psi.psi, Construction::quantized, bits};
  for (cplx& v : out.psi.data()) {
    const double mag = std::abs(v);
    if (mag == 0.0) continue;
    double q = std::round(std::arg(v) / step);
    if (q < 0) q += levels;
    q = std::fmod(q, levels);
    // Exact values on the axes keep Hadamard and {0, pi} designs unchanged.
    const double ql = q / levels;
    cplx snapped;
    if (ql == 0.0) snapped = 1.0;
    else if (ql == 0.5) snapped = -1.0;
    else if (ql == 0.25) snapped = cplx(0.0, 1.0);
    else if (ql == 0.75) snapped = cplx(0.0, -1.0);
    else snapped = std::polar(1.0, q * step);
    v = mag * snapped;
  }
  return out;
}

double ls_mse_objective(const ComplexMatrix& psi, std::size_t n_t, double sigma_n2) {
  const ComplexMatrix gram = psi * psi.hermitian();
  const ComplexMatrix inv = hermitian_inverse(gram);
  return static_cast<double>(n_t) * sigma_n2 * inv.trace().real();
}

ActivationPattern make_pattern(PatternKind kind, std::size_t grid_rows, std::size_t grid_cols, std::size_t b, Rng& rng) {
  if (grid_rows == 0 || grid_cols == 0) throw DimensionError("make_pattern: grid dims must be >= 1");
  const std::size_t m = grid_rows * grid_cols;
  if (b < 1 || b > m) {
    std::ostringstream msg;
    msg << "make_pattern: b = " << b << " outside [1, " << m << "]";
    throw PreconditionError(msg.str());
  }
  ActivationPattern p{grid_rows, grid_cols, std::vector<bool>(m, false), kind};
  switch (kind) {
    case PatternKind::column: {
      if (b % grid_rows != 0) throw PreconditionError("make_pattern: column pattern needs b divisible by grid rows");
      for (std::size_t c = 0; c < b / grid_rows; ++c) {
        for (std::size_t r = 0; r < grid_rows; ++r) p.mask[r * grid_cols + c] = true;
      }
      break;
    }
    case PatternKind::row: {
      if (b % grid_cols != 0) throw PreconditionError("make_pattern: row pattern needs b divisible by grid cols");
      for (std::size_t r = 0; r < b / grid_cols; ++r) {
        for (std::size_t c = 0; c < grid_cols; ++c) p.mask[r * grid_cols + c] = true;
      }
      break;
    }
    case PatternKind::random: {
      std::vector<std::size_t> idx(m);
      std::iota(idx.begin(), idx.end(), 0);
      for (std::size_t i = 0; i < b; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, m - 1);
        std::swap(idx[i], idx[pick(rng)]);
      }
      for (std::size_t i = 0; i < b; ++i) p.mask[idx[i]] = true;
      break;
    }
    case PatternKind::proposed: {
      if (b <= grid_rows) {
        for (std::size_t e = 0; e < b; ++e) p.mask[(e * grid_rows / b) * grid_cols] = true;
        break;
      }
      for (std::size_t r = 0; r < grid_rows; ++r) p.mask[r * grid_cols] = true;
      const std::size_t extra = b - grid_rows;
      for (std::size_t e = 0; e < extra; ++e) {
        const std::size_t r = extra <= grid_rows ? e * grid_rows / extra : e % grid_rows;
        const std::size_t c = 1 + (e * (grid_cols - 1)) / extra;
        p.mask[r * grid_cols + c] = true;
      }
      break;
    }
  }
  return p;
}

PhaseMatrix reduce_psi(const PhaseMatrix& base, const ActivationPattern& pattern) {
  const std::size_t b = pattern.active_count();
  if (base.psi.rows() != b || base.psi.cols() != b) {
    std::ostringstream msg;
    msg << "reduce_psi: base is " << base.psi.rows() << "x" << base.psi.cols() << " but pattern has " << b
        << " active elements";
    throw DimensionError(msg.str());
  }
  PhaseMatrix out{ComplexMatrix(pattern.m(), b), base.construction, base.bits};
  const auto idx = pattern.active_indices();
  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t t = 0; t < b; ++t) out.psi(idx[i], t) = base.psi(i, t);
  }
  return out;
}

ComplexMatrix compress_rows(const ComplexMatrix& full, const ActivationPattern& pattern) {
  if (full.rows() != pattern.m()) throw DimensionError("compress_rows: row count differs from pattern size");
  const auto idx = pattern.active_indices();
  if (idx.empty()) throw PreconditionError("compress_rows: pattern has no active elements");
  ComplexMatrix out(idx.size(), full.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    for (std::size_t t = 0; t < full.cols(); ++t) out(i, t) = full(idx[i], t);
  }
  return out;
}

std::string format_pattern(const ActivationPattern& pattern) {
  std::ostringstream os;
  os << "# pattern kind=" << to_string(pattern.kind) << " b=" << pattern.active_count() << "\n";
  for (std::size_t r = 0; r < pattern.rows; ++r) {
    for (std::size_t c = 0; c < pattern.cols; ++c) os << r << "," << c << "," << (pattern.active(r, c) ? 1 : 0) << "\n";
  }
  return os.str();
}

void export_pattern(const ActivationPattern& pattern, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f << format_pattern(pattern);
  if (!f) throw IoError("write failed: " + path.string());
}

}  // namespace irsmba::pilot
