// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "irsmba/tensor/tensor.hpp"

namespace irsmba::tensor {

struct NamedTensor {
  std::string name;
  Tensor tensor;
};

// Parameter checkpoint layout (all integers little-endian):
//   "IRSW" | u16 version | u32 blob count |
//   per blob: u16 name length | UTF-8 name | u8 ndim | u32 dims[ndim] | f64 payload
inline constexpr std::uint16_t kCheckpointVersion = 1;

std::vector<std::uint8_t> encode_checkpoint(const std::vector<NamedTensor>& blobs);
std::vector<NamedTensor> decode_checkpoint(const std::vector<std::uint8_t>& bytes);

void save_checkpoint(const std::filesystem::path& path, const std::vector<NamedTensor>& blobs);
std::vector<NamedTensor> load_checkpoint(const std::filesystem::path& path);

}  // namespace irsmba::tensor
