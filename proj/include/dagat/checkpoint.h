//
// dagat - Copyright 2026 The dagat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DAGAT_CHECKPOINT_H_
#define DAGAT_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "dagat/model.h"

namespace dagat {

// Byte layout in docs/formats.md.
inline constexpr std::string_view kCheckpointMagic { "DAGATCK\0", 8 };
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  ModelConfig config;
  ModelParams params;
  std::uint64_t iteration = 0;

  bool operator==(const Checkpoint &) const = default;
};

std::string encode_checkpoint(const Checkpoint &ckpt);
// Throws FormatError on bad magic, version or checksum.
Checkpoint decode_checkpoint(std::string_view bytes);

void save_checkpoint(const std::filesystem::path &path, const Checkpoint &ckpt);
Checkpoint load_checkpoint(const std::filesystem::path &path);
// Additionally throws ShapeError if the stored parameters do not fit
// `expected`.
Checkpoint load_checkpoint(const std::filesystem::path &path,
                           const ModelConfig &expected);

} // namespace dagat

#endif // DAGAT_CHECKPOINT_H_
