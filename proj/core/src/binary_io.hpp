#pragma once

// Internal little-endian binary IO helpers shared by the checkpoint and
// replay-buffer file formats. Readers track the byte offset so format
// errors can name where the file went wrong.

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "lrrl/errors.hpp"

namespace lrrl::io {

class Writer {
 public:
  explicit Writer(const std::filesystem::path& path)
      : path_(path.string()), out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw FormatError("cannot open for writing: " + path_);
  }

  void magic(const char tag[4]) { out_.write(tag, 4); }
  void u8(uint8_t v) { raw(&v, 1); }
  void u32(uint32_t v) { raw(&v, 4); }
  void u64(uint64_t v) { raw(&v, 8); }
  void f32(float v) { raw(&v, 4); }

  void close() {
    out_.close();
    if (!out_) throw FormatError("write failed: " + path_);
  }

 private:
  void raw(const void* p, std::size_t n) {
    out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
  }
  std::string path_;
  std::ofstream out_;
};

class Reader {
 public:
  explicit Reader(const std::filesystem::path& path)
      : path_(path.string()), in_(path, std::ios::binary) {
    if (!in_) throw FormatError("cannot open for reading: " + path_);
  }

  void expect_magic(const char tag[4]) {
    char buf[4];
    raw(buf, 4, "magic");
    if (std::memcmp(buf, tag, 4) != 0) {
      throw FormatError(path_ + ": bad magic at offset 0, expected \"" +
                        std::string(tag, 4) + "\"");
    }
  }

  uint8_t u8(const char* what) {
    uint8_t v;
    raw(&v, 1, what);
    return v;
  }
  uint32_t u32(const char* what) {
    uint32_t v;
    raw(&v, 4, what);
    return v;
  }
  uint64_t u64(const char* what) {
    uint64_t v;
    raw(&v, 8, what);
    return v;
  }
  float f32(const char* what) {
    float v;
    raw(&v, 4, what);
    return v;
  }

  void expect_eof() {
    if (in_.peek() != std::char_traits<char>::eof()) {
      throw FormatError(path_ + ": trailing bytes at offset " +
                        std::to_string(offset_));
    }
  }

  std::size_t offset() const { return offset_; }

 private:
  void raw(void* p, std::size_t n, const char* what) {
    in_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) {
      throw FormatError(path_ + ": truncated while reading " +
                        std::string(what) + " at offset " +
                        std::to_string(offset_));
    }
    offset_ += n;
  }
  std::string path_;
  std::ifstream in_;
  std::size_t offset_ = 0;
};

}  // namespace lrrl::io
