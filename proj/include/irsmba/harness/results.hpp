// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace irsmba::harness {

struct ResultRow {
  std::string method;  // ls_aug, can or mba
  std::size_t b = 0;
  double snr_db = 0.0;
  double nmse = 0.0;
  double wall_time_ms = 0.0;
  double flop_estimate = 0.0;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

inline constexpr const char* kResultHeader = "method,b,snr_db,nmse,wall_time_ms,flop_estimate";

/// Reals use 17 significant digits, so parsing a row back is bit-exact.
std::string format_results(const std::vector<ResultRow>& rows);
std::vector<ResultRow> parse_results(const std::string& text);

void export_results(const std::vector<ResultRow>& rows, const std::filesystem::path& path);
std::vector<ResultRow> read_results(const std::filesystem::path& path);

}  // namespace irsmba::harness
