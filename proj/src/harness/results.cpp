// SPDX-License-Identifier: Apache-2.0
#include "irsmba/harness/results.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

#include "irsmba/binary_io.hpp"
#include "irsmba/error.hpp"

namespace irsmba::harness {

namespace {

void put_real(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

double get_real(const std::string& field, std::size_t line) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || p != field.data() + field.size()) {
    throw IoError("results line " + std::to_string(line) + ": bad number '" + field + "'");
  }
  return v;
}

}  // namespace

std::string format_results(const std::vector<ResultRow>& rows) {
  std::string out = kResultHeader;
  out += "\n";
  for (const auto& r : rows) {
    out += r.method;
    out += ",";
    out += std::to_string(r.b);
    out += ",";
    put_real(out, r.snr_db);
    out += ",";
    put_real(out, r.nmse);
    out += ",";
    put_real(out, r.wall_time_ms);
    out += ",";
    put_real(out, r.flop_estimate);
    out += "\n";
  }
  return out;
}

std::vector<ResultRow> parse_results(const std::string& text) {
  std::stringstream ss(text);
  std::string line;
  if (!std::getline(ss, line) || line != kResultHeader) throw IoError("results: missing or unexpected header");
  std::vector<ResultRow> rows;
  std::size_t lineno = 1;
  while (std::getline(ss, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string item;
    while (std::getline(ls, item, ',')) f.push_back(item);
    if (f.size() != 6) throw IoError("results line " + std::to_string(lineno) + ": expected 6 fields");
    ResultRow r;
    r.method = f[0];
    r.b = static_cast<std::size_t>(get_real(f[1], lineno));
    r.snr_db = get_real(f[2], lineno);
    r.nmse = get_real(f[3], lineno);
    r.wall_time_ms = get_real(f[4], lineno);
    r.flop_estimate = get_real(f[5], lineno);
    rows.push_back(std::move(r));
  }
  return rows;
}

void export_results(const std::vector<ResultRow>& rows, const std::filesystem::path& path) {
  const std::string text = format_results(rows);
  io::write_file(path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

std::vector<ResultRow> read_results(const std::filesystem::path& path) {
  const auto bytes = io::read_file(path);
  return parse_results(std::string(bytes.begin(), bytes.end()));
}

}  // namespace irsmba::harness
