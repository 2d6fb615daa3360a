// SPDX-License-Identifier: Apache-2.0
#include "irsmba/binary_io.hpp"

#include <fstream>
#include <iterator>

#include "irsmba/error.hpp"

namespace irsmba::io {

std::uint64_t ByteReader::get(int n) {
  if (pos_ + static_cast<std::size_t>(n) > bytes_.size()) {
    throw IoError("truncated input at byte " + std::to_string(pos_));
  }
  std::uint64_t v = 0;
  for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_ + static_cast<std::size_t>(i)]) << (8 * i);
  pos_ += static_cast<std::size_t>(n);
  return v;
}

std::string ByteReader::str(std::size_t n) {
  if (pos_ + n > bytes_.size()) throw IoError("truncated string at byte " + std::to_string(pos_));
  std::string s(bytes_.begin() + static_cast<std::ptrdiff_t>(pos_), bytes_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
  pos_ += n;
  return s;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace irsmba::io
