//
// dagat - Copyright 2026 The dagat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DAGAT_BINARY_IO_H_
#define DAGAT_BINARY_IO_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dagat {

class FormatError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Little-endian byte sink for the cache and checkpoint formats.
class ByteWriter {
public:
  void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void f64(double v);
  void str(std::string_view s);
  void raw(std::string_view bytes) { buf_.append(bytes); }

  const std::string &bytes() const { return buf_; }
  std::string take() { return std::move(buf_); }

private:
  std::string buf_;
};

class ByteReader {
public:
  explicit ByteReader(std::string_view bytes): bytes_(bytes) { }

  std::uint8_t u8();
  std::uint32_t u32();
  std::uint64_t u64();
  double f64();
  std::string str();
  std::string_view raw(std::size_t n);

  std::size_t remaining() const { return bytes_.size() - pos_; }
  std::size_t position() const { return pos_; }

private:
  void need(std::size_t n) const;

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

std::uint32_t crc32(std::string_view bytes);

std::string read_binary_file(const std::filesystem::path &path);

// Writes to a sibling temporary file, then renames over `path`, so readers
// never observe a partially written file. Missing parent directories are
// created.
void atomic_write_file(const std::filesystem::path &path,
                       std::string_view bytes);

} // namespace dagat

#endif // DAGAT_BINARY_IO_H_
