//
// dagat - Copyright 2026 The dagat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "dagat/checkpoint.h"

#include "dagat/binary_io.h"

namespace dagat {
namespace {

void write_config(ByteWriter &w, const ModelConfig &c) {
  w.u64(c.input_dim);
  w.u64(c.num_gat_layers);
  w.u64(c.gat_dim);
  w.u64(c.fc_dims.size());
  for (std::size_t d: c.fc_dims)
    w.u64(d);
  w.f64(c.dropout_rate);
  w.u8(c.dropout_after_gat ? 1 : 0);
}

ModelConfig read_config(ByteReader &r) {
  ModelConfig c;
  c.input_dim = r.u64();
  c.num_gat_layers = r.u64();
  c.gat_dim = r.u64();
  const std::uint64_t nfc = r.u64();
  if (nfc > 1024)
    throw FormatError("implausible fully connected layer count");
  c.fc_dims.assign(nfc, 0);
  for (auto &d: c.fc_dims)
    d = r.u64();
  c.dropout_rate = r.f64();
  c.dropout_after_gat = r.u8() != 0;
  return c;
}

// Empty-shaped parameter skeleton for `cfg`; tensors are filled from the file.
ModelParams skeleton(const ModelConfig &cfg) {
  ModelParams p;
  p.layers.resize(cfg.num_gat_layers);
  p.fc_weights.resize(cfg.fc_dims.size());
  p.fc_biases.resize(cfg.fc_dims.size());
  return p;
}

} // namespace

std::string encode_checkpoint(const Checkpoint &ckpt) {
  ByteWriter w;
  w.raw(kCheckpointMagic);
  w.u32(kCheckpointVersion);
  write_config(w, ckpt.config);
  w.u64(ckpt.iteration);
  const auto tensors = ckpt.params.tensors();
  w.u64(tensors.size());
  for (const Matrix *m: tensors) {
    w.u64(m->rows());
    w.u64(m->cols());
    for (Real v: m->data())
      w.f64(static_cast<double>(v));
  }
  w.u32(crc32(w.bytes()));
  return w.take();
}

Checkpoint decode_checkpoint(std::string_view bytes) {
  if (bytes.size() < kCheckpointMagic.size() + 8)
    throw FormatError("checkpoint too short");
  if (bytes.substr(0, kCheckpointMagic.size()) != kCheckpointMagic)
    throw FormatError("not a checkpoint (bad magic)");
  const std::string_view body = bytes.substr(0, bytes.size() - 4);
  ByteReader trailer(bytes.substr(bytes.size() - 4));
  if (trailer.u32() != crc32(body))
    throw FormatError("checkpoint checksum mismatch");

  ByteReader r(body);
  r.raw(kCheckpointMagic.size());
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion)
    throw FormatError("unsupported checkpoint version "
                      + std::to_string(version));
  Checkpoint ckpt;
  ckpt.config = read_config(r);
  ckpt.iteration = r.u64();
  ckpt.params = skeleton(ckpt.config);
  const auto tensors = ckpt.params.tensors();
  const std::uint64_t count = r.u64();
  if (count != tensors.size())
    throw FormatError("checkpoint holds " + std::to_string(count)
                      + " tensors, its config implies "
                      + std::to_string(tensors.size()));
  for (Matrix *m: tensors) {
    const std::uint64_t rows = r.u64();
    const std::uint64_t cols = r.u64();
    if (rows * cols * 8 > r.remaining())
      throw FormatError("tensor exceeds checkpoint size");
    Matrix t(rows, cols);
    for (Real &v: t.data())
      v = static_cast<Real>(r.f64());
    *m = std::move(t);
  }
  if (r.remaining() != 0)
    throw FormatError("trailing bytes in checkpoint");
  ckpt.params.check_shapes(ckpt.config);
  return ckpt;
}

void save_checkpoint(const std::filesystem::path &path,
                     const Checkpoint &ckpt) {
  atomic_write_file(path, encode_checkpoint(ckpt));
}

Checkpoint load_checkpoint(const std::filesystem::path &path) {
  return decode_checkpoint(read_binary_file(path));
}

Checkpoint load_checkpoint(const std::filesystem::path &path,
                           const ModelConfig &expected) {
  Checkpoint ckpt = load_checkpoint(path);
  ckpt.params.check_shapes(expected);
  return ckpt;
}

} // namespace dagat
