// SPDX-License-Identifier: Apache-2.0
#include "irsmba/harness/container.hpp"

#include <limits>

#include "irsmba/binary_io.hpp"
#include "irsmba/error.hpp"

namespace irsmba::harness {

std::vector<std::uint8_t> encode_records(const std::vector<Record>& records) {
  io::ByteWriter w;
  for (const Record& r : records) {
    const auto& t = r.tensor;
    if (t.ndim() == 0 || t.ndim() > 255) throw DimensionError("container: tensor rank must be in [1, 255]");
    w.bytes("IRST", 4);
    w.u16(kContainerVersion);
    w.u8(static_cast<std::uint8_t>(r.dtype));
    w.u8(static_cast<std::uint8_t>(t.ndim()));
    for (std::size_t d : t.dims()) {
      if (d > std::numeric_limits<std::uint32_t>::max()) throw DimensionError("container: dimension exceeds 32 bits");
      w.u32(static_cast<std::uint32_t>(d));
    }
    if (r.dtype == DType::f64) {
      for (double v : t.data()) w.f64(v);
    } else {
      for (double v : t.data()) w.f32(static_cast<float>(v));
    }
  }
  return std::move(w.buffer());
}

std::vector<Record> decode_records(const std::vector<std::uint8_t>& bytes) {
  io::ByteReader r(bytes);
  std::vector<Record> out;
  while (!r.at_end()) {
    if (r.str(4) != "IRST") throw IoError("container: bad magic at byte " + std::to_string(r.position() - 4));
    const std::uint16_t version = r.u16();
    if (version != kContainerVersion) throw IoError("container: unsupported version " + std::to_string(version));
    const std::uint8_t code = r.u8();
    if (code > 1) throw IoError("container: unknown dtype code " + std::to_string(code));
    const std::uint8_t ndim = r.u8();
    if (ndim == 0) throw IoError("container: zero-rank record");
    tensor::Shape dims(ndim);
    for (auto& d : dims) {
      d = r.u32();
      if (d == 0) throw IoError("container: zero-length dimension");
    }
    Record rec;
    rec.dtype = static_cast<DType>(code);
    rec.tensor = tensor::Tensor(dims);
    for (double& v : rec.tensor.data()) v = rec.dtype == DType::f64 ? r.f64() : static_cast<double>(r.f32());
    out.push_back(std::move(rec));
  }
  return out;
}

void write_records(const std::filesystem::path& path, const std::vector<Record>& records) {
  io::write_file(path, encode_records(records));
}

std::vector<Record> read_records(const std::filesystem::path& path) { return decode_records(io::read_file(path)); }

void write_tensor(const std::filesystem::path& path, const tensor::Tensor& t) {
  write_records(path, {Record{DType::f64, t}});
}

tensor::Tensor read_tensor(const std::filesystem::path& path) {
  auto recs = read_records(path);
  if (recs.size() != 1) throw IoError(path.string() + ": expected one record, found " + std::to_string(recs.size()));
  return std::move(recs.front().tensor);
}

}  // namespace irsmba::harness
