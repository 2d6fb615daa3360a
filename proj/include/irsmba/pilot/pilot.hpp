// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "irsmba/channel/complex_matrix.hpp"
#include "irsmba/random.hpp"

namespace irsmba::pilot {

enum class Construction { dft, hadamard, random_unimodular, quantized };

/// IRS training matrix: rows are IRS elements, columns are training slots.
struct PhaseMatrix {
  ComplexMatrix psi;
  Construction construction = Construction::dft;
  unsigned bits = 0;  // only for `quantized`

  std::size_t m() const { return psi.rows(); }
  std::size_t b() const { return psi.cols(); }
};

enum class PatternKind { column, row, random, proposed };

std::string to_string(PatternKind kind);
PatternKind parse_pattern_kind(const std::string& name);

/// Which IRS elements reflect during training, row-major over the grid.
struct ActivationPattern {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<bool> mask;
  PatternKind kind = PatternKind::proposed;

  std::size_t m() const { return rows * cols; }
  std::size_t active_count() const;
  /// Active element indices, ascending.
  std::vector<std::size_t> active_indices() const;
  bool active(std::size_t r, std::size_t c) const { return mask[r * cols + c]; }
};

/// exp(-j 2 pi i k / n).
PhaseMatrix dft_matrix(std::size_t n);

/// Sylvester construction; n must be a power of two.
PhaseMatrix hadamard_matrix(std::size_t n);

/// I.i.d. phases uniform on [0, 2 pi).
PhaseMatrix random_unimodular(std::size_t m, std::size_t b, Rng& rng);

/// Snaps each non-zero entry's phase to the nearest of 2^bits uniform levels.
PhaseMatrix quantize_phases(const PhaseMatrix& psi, unsigned bits);

/// N_t * sigma_n^2 * tr{(Psi Psi^H)^-1}. Throws SingularMatrixError for a
/// singular or ill-conditioned Gram matrix.
double ls_mse_objective(const ComplexMatrix& psi, std::size_t n_t, double sigma_n2);

/// `rng` is only consumed by the random kind.
ActivationPattern make_pattern(PatternKind kind, std::size_t grid_rows, std::size_t grid_cols, std::size_t b, Rng& rng);

/// Expands a b x b design to M x b: active element rows carry the base rows in
/// ascending element order, inactive rows are zero.
PhaseMatrix reduce_psi(const PhaseMatrix& base, const ActivationPattern& pattern);

/// Keeps only the rows of an M x b design at active elements.
ComplexMatrix compress_rows(const ComplexMatrix& full, const ActivationPattern& pattern);

/// Text export: `# pattern kind=<kind> b=<B>` then `row,col,active` per element.
std::string format_pattern(const ActivationPattern& pattern);
void export_pattern(const ActivationPattern& pattern, const std::filesystem::path& path);

}  // namespace irsmba::pilot
