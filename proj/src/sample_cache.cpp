//
// dagat - Copyright 2026 The dagat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "dagat/sample_cache.h"

#include "dagat/binary_io.h"
#include "dagat/features.h"

namespace dagat {

std::string encode_samples(const std::vector<GraphSample> &samples) {
  ByteWriter w;
  w.raw(kSampleCacheMagic);
  w.u32(kSampleCacheVersion);
  w.u64(samples.size());
  for (const GraphSample &s: samples) {
    const std::size_t n = s.num_atoms();
    w.str(s.complex_id);
    w.str(s.protein_id);
    w.u8(static_cast<std::uint8_t>(s.category));
    w.u8(s.label ? static_cast<std::uint8_t>(*s.label) : 0xFF);
    w.u8(s.rmsd ? 1 : 0);
    w.f64(s.rmsd.value_or(0.0));
    w.u32(static_cast<std::uint32_t>(n));
    for (std::uint8_t v: s.is_ligand)
      w.u8(v);
    for (Real v: s.features.data())
      w.u8(v != 0 ? 1 : 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        w.u8(s.a1(i, j) != 0 ? 1 : 0);
        w.u8(s.inter_mask(i, j) != 0 ? 1 : 0);
        w.f64(static_cast<double>(s.dist(i, j)));
      }
  }
  w.u32(crc32(w.bytes()));
  return w.take();
}

std::vector<GraphSample> decode_samples(std::string_view bytes) {
  if (bytes.size() < kSampleCacheMagic.size() + 4 + 8 + 4)
    throw FormatError("sample cache too short");
  const std::string_view body = bytes.substr(0, bytes.size() - 4);
  ByteReader trailer(bytes.substr(bytes.size() - 4));
  if (trailer.u32() != crc32(body))
    throw FormatError("sample cache checksum mismatch");

  ByteReader r(body);
  if (r.raw(kSampleCacheMagic.size()) != kSampleCacheMagic)
    throw FormatError("not a sample cache (bad magic)");
  const std::uint32_t version = r.u32();
  if (version != kSampleCacheVersion)
    throw FormatError("unsupported sample cache version "
                      + std::to_string(version));
  const std::uint64_t count = r.u64();
  std::vector<GraphSample> out;
  for (std::uint64_t k = 0; k < count; ++k) {
    GraphSample s;
    s.complex_id = r.str();
    s.protein_id = r.str();
    const std::uint8_t cat = r.u8();
    if (cat > static_cast<std::uint8_t>(Category::kUnlabeled))
      throw FormatError("bad category code " + std::to_string(cat));
    s.category = static_cast<Category>(cat);
    const std::uint8_t label = r.u8();
    if (label == 0 || label == 1)
      s.label = label;
    else if (label != 0xFF)
      throw FormatError("bad label code " + std::to_string(label));
    const bool has_rmsd = r.u8() != 0;
    const double rmsd = r.f64();
    if (has_rmsd)
      s.rmsd = rmsd;
    const std::size_t n = r.u32();
    s.is_ligand.resize(n);
    for (auto &v: s.is_ligand)
      v = r.u8();
    s.features = Matrix(n, feature_layout::kDim);
    for (Real &v: s.features.data())
      v = r.u8();
    s.a1 = Matrix::identity(n);
    s.inter_mask = Matrix(n, n);
    s.dist = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        s.a1(i, j) = s.a1(j, i) = r.u8();
        s.inter_mask(i, j) = s.inter_mask(j, i) = r.u8();
        s.dist(i, j) = s.dist(j, i) = static_cast<Real>(r.f64());
      }
    out.push_back(std::move(s));
  }
  if (r.remaining() != 0)
    throw FormatError("trailing bytes in sample cache");
  return out;
}

void write_sample_cache(const std::filesystem::path &path,
                        const std::vector<GraphSample> &samples) {
  atomic_write_file(path, encode_samples(samples));
}

std::vector<GraphSample> read_sample_cache(const std::filesystem::path &path) {
  return decode_samples(read_binary_file(path));
}

} // namespace dagat
