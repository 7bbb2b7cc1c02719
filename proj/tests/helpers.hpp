#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "xsbridge/assembler.hpp"
#include "xsbridge/datagram.hpp"
#include "xsbridge/frame.hpp"

namespace xsbridge::testing {

inline ByteBuffer bytes_from_hex(const std::string& hex) {
  ByteBuffer out;
  int hi = -1;
  for (char c : hex) {
    int v;
    if (c >= '0' && c <= '9') v = c - '0';
    else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
    else continue;  // whitespace and separators
    if (hi < 0) {
      hi = v;
    } else {
      out.push_back(static_cast<uint8_t>(hi << 4 | v));
      hi = -1;
    }
  }
  return out;
}

inline std::string hex_from_bytes(std::span<const uint8_t> bytes) {
  static const char digits[] = "0123456789ABCDEF";
  std::string out;
  for (uint8_t b : bytes) {
    out += digits[b >> 4];
    out += digits[b & 0xF];
  }
  return out;
}

inline ByteBuffer load_fixture(const std::string& name) {
  std::ifstream in(std::string(XSBRIDGE_FIXTURE_DIR) + "/" + name);
  REQUIRE_MESSAGE(in.good(), "fixture not found: " << name);
  std::ostringstream buf;
  buf << in.rdbuf();
  return bytes_from_hex(buf.str());
}

inline std::string load_fixture_text(const std::string& name) {
  std::ifstream in(std::string(XSBRIDGE_FIXTURE_DIR) + "/" + name, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "fixture not found: " << name);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Brute-force reference assembler: groups the loss-free, in-order datagram
/// list by sample counter and merges each group outright. No buffering, no
/// windows; the ground truth the streaming assembler must match.
inline std::vector<MotionFrame> reference_assemble(const std::vector<Datagram>& in_order) {
  std::vector<MotionFrame> frames;
  size_t i = 0;
  while (i < in_order.size()) {
    uint32_t sample = in_order[i].header.sample_counter;
    MotionFrame frame;
    while (i < in_order.size() && in_order[i].header.sample_counter == sample) {
      merge_datagram_into_frame(frame, in_order[i]);
      ++i;
    }
    frames.push_back(std::move(frame));
  }
  return frames;
}

/// Applies duplication and bounded reordering. Each pass swaps ~swap_rate of
/// adjacent pairs, so a datagram moves at most `passes` positions: far less
/// than one full sample of datagrams, which keeps every displacement inside
/// the assembler's two-sample lateness window.
inline std::vector<Datagram> inject_reorder_duplicate(const std::vector<Datagram>& in_order,
                                                      uint32_t seed, double swap_rate = 0.10,
                                                      double dup_rate = 0.05, int passes = 3) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  std::vector<Datagram> out = in_order;
  for (int pass = 0; pass < passes; ++pass)
    for (size_t i = 0; i + 1 < out.size(); i += 2)
      if (coin(rng) < swap_rate) std::swap(out[i], out[i + 1]);

  std::vector<Datagram> with_dups;
  for (const auto& d : out) {
    with_dups.push_back(d);
    if (coin(rng) < dup_rate) with_dups.push_back(d);
  }
  return with_dups;
}

/// Feed everything, then flush; frames concatenated in emission order.
inline std::vector<MotionFrame> assemble_all(FrameAssembler& assembler,
                                             const std::vector<Datagram>& datagrams) {
  std::vector<MotionFrame> frames;
  for (const auto& d : datagrams)
    for (auto& f : assembler.feed(d)) frames.push_back(std::move(f));
  for (auto& f : assembler.flush()) frames.push_back(std::move(f));
  return frames;
}

}  // namespace xsbridge::testing
