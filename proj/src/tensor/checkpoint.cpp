// SPDX-License-Identifier: Apache-2.0
#include "irsmba/tensor/checkpoint.hpp"

#include <limits>

#include "irsmba/binary_io.hpp"
#include "irsmba/error.hpp"

namespace irsmba::tensor {

std::vector<std::uint8_t> encode_checkpoint(const std::vector<NamedTensor>& blobs) {
  io::ByteWriter w;
  w.bytes("IRSW", 4);
  w.u16(kCheckpointVersion);
  w.u32(static_cast<std::uint32_t>(blobs.size()));
  for (const auto& b : blobs) {
    if (b.name.size() > std::numeric_limits<std::uint16_t>::max()) throw IoError("checkpoint: name too long");
    if (b.tensor.ndim() > std::numeric_limits<std::uint8_t>::max()) throw IoError("checkpoint: too many dims");
    w.u16(static_cast<std::uint16_t>(b.name.size()));
    w.bytes(b.name.data(), b.name.size());
    w.u8(static_cast<std::uint8_t>(b.tensor.ndim()));
    for (std::size_t d : b.tensor.dims()) w.u32(static_cast<std::uint32_t>(d));
    for (double v : b.tensor.data()) w.f64(v);
  }
  return std::move(w.buffer());
}

std::vector<NamedTensor> decode_checkpoint(const std::vector<std::uint8_t>& bytes) {
  io::ByteReader r(bytes);
  if (r.str(4) != "IRSW") throw IoError("checkpoint: bad magic (expected IRSW)");
  const auto version = r.u16();
  if (version != kCheckpointVersion) throw IoError("checkpoint: unsupported version " + std::to_string(version));
  const auto count = r.u32();
  std::vector<NamedTensor> out;
  out.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    NamedTensor nt;
    nt.name = r.str(r.u16());
    const auto ndim = r.u8();
    Shape dims(ndim);
    for (auto& d : dims) d = r.u32();
    std::vector<double> data(shape_numel(dims));
    for (auto& v : data) v = r.f64();
    nt.tensor = Tensor(std::move(dims), std::move(data));
    out.push_back(std::move(nt));
  }
  if (!r.at_end()) throw IoError("checkpoint: trailing bytes after last blob");
  return out;
}

void save_checkpoint(const std::filesystem::path& path, const std::vector<NamedTensor>& blobs) {
  io::write_file(path, encode_checkpoint(blobs));
}

std::vector<NamedTensor> load_checkpoint(const std::filesystem::path& path) {
  return decode_checkpoint(io::read_file(path));
}

}  // namespace irsmba::tensor
