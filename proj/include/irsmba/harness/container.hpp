// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "irsmba/tensor/tensor.hpp"

namespace irsmba::harness {

// Tensor container record (integers little-endian):
//   "IRST" | u16 version | u8 dtype (0 = f32, 1 = f64) | u8 ndim | u32 dims[ndim] | payload, row-major
// A file is a sequence of records.
inline constexpr std::uint16_t kContainerVersion = 1;

enum class DType : std::uint8_t { f32 = 0, f64 = 1 };

struct Record {
  DType dtype = DType::f64;
  tensor::Tensor tensor;  // f32 payloads are widened on read
};

std::vector<std::uint8_t> encode_records(const std::vector<Record>& records);
std::vector<Record> decode_records(const std::vector<std::uint8_t>& bytes);

void write_records(const std::filesystem::path& path, const std::vector<Record>& records);
std::vector<Record> read_records(const std::filesystem::path& path);

/// Single f64 record convenience forms.
void write_tensor(const std::filesystem::path& path, const tensor::Tensor& t);
tensor::Tensor read_tensor(const std::filesystem::path& path);

}  // namespace irsmba::harness
