#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <vector>

#include "xsbridge/errors.hpp"

namespace xsbridge {

using ByteBuffer = std::vector<uint8_t>;

/// Bounds-checked big-endian reader. Every accessor throws on underrun with
/// the code supplied at construction, so callers never read past the buffer.
class WireReader {
public:
  explicit WireReader(std::span<const uint8_t> data, ErrorCode underrun = ErrorCode::TooShort)
      : data_(data), underrun_(underrun) {}

  size_t remaining() const { return data_.size() - pos_; }
  size_t position() const { return pos_; }

  uint8_t u8() {
    need(1);
    return data_[pos_++];
  }

  uint16_t u16() {
    need(2);
    uint16_t v = static_cast<uint16_t>(data_[pos_] << 8 | data_[pos_ + 1]);
    pos_ += 2;
    return v;
  }

  uint32_t u32() {
    need(4);
    uint32_t v = static_cast<uint32_t>(data_[pos_]) << 24 | static_cast<uint32_t>(data_[pos_ + 1]) << 16 |
                 static_cast<uint32_t>(data_[pos_ + 2]) << 8 | static_cast<uint32_t>(data_[pos_ + 3]);
    pos_ += 4;
    return v;
  }

  uint64_t u64() {
    uint64_t hi = u32();
    return hi << 32 | u32();
  }

  float f32() { return std::bit_cast<float>(u32()); }

  std::string text(size_t len) {
    need(len);
    std::string s(reinterpret_cast<const char*>(data_.data() + pos_), len);
    pos_ += len;
    return s;
  }

  std::span<const uint8_t> bytes(size_t len) {
    need(len);
    auto out = data_.subspan(pos_, len);
    pos_ += len;
    return out;
  }

private:
  void need(size_t n) const {
    if (data_.size() - pos_ < n) fail(underrun_, "buffer underrun");
  }

  std::span<const uint8_t> data_;
  size_t pos_ = 0;
  ErrorCode underrun_;
};

/// Big-endian appender.
class WireWriter {
public:
  void u8(uint8_t v) { out_.push_back(v); }

  void u16(uint16_t v) {
    out_.push_back(static_cast<uint8_t>(v >> 8));
    out_.push_back(static_cast<uint8_t>(v));
  }

  void u32(uint32_t v) {
    out_.push_back(static_cast<uint8_t>(v >> 24));
    out_.push_back(static_cast<uint8_t>(v >> 16));
    out_.push_back(static_cast<uint8_t>(v >> 8));
    out_.push_back(static_cast<uint8_t>(v));
  }

  void u64(uint64_t v) {
    u32(static_cast<uint32_t>(v >> 32));
    u32(static_cast<uint32_t>(v));
  }

  void f32(float v) { u32(std::bit_cast<uint32_t>(v)); }

  void text(const std::string& s) {
    out_.insert(out_.end(), s.begin(), s.end());
  }

  void bytes(std::span<const uint8_t> data) { out_.insert(out_.end(), data.begin(), data.end()); }

  size_t size() const { return out_.size(); }
  ByteBuffer take() { return std::move(out_); }
  const ByteBuffer& buffer() const { return out_; }

private:
  ByteBuffer out_;
};

}  // namespace xsbridge
