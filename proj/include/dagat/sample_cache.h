//
// dagat - Copyright 2026 The dagat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DAGAT_SAMPLE_CACHE_H_
#define DAGAT_SAMPLE_CACHE_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "dagat/graph.h"

namespace dagat {

// Binary GraphSample cache; byte layout in docs/formats.md.
inline constexpr std::string_view kSampleCacheMagic { "DAGATGS\0", 8 };
inline constexpr std::uint32_t kSampleCacheVersion = 1;

std::string encode_samples(const std::vector<GraphSample> &samples);
// Throws FormatError on bad magic, version, checksum or truncation.
std::vector<GraphSample> decode_samples(std::string_view bytes);

void write_sample_cache(const std::filesystem::path &path,
                        const std::vector<GraphSample> &samples);
std::vector<GraphSample> read_sample_cache(const std::filesystem::path &path);

} // namespace dagat

#endif // DAGAT_SAMPLE_CACHE_H_
