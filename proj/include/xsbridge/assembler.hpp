#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "xsbridge/frame.hpp"

namespace xsbridge {

/// Counters kept by the assembler and receive loop. All counters are
/// monotonically non-decreasing.
struct StreamStats {
  uint64_t datagrams_received = 0;
  uint64_t frames_emitted = 0;
  uint64_t frames_dropped = 0;  // sample-counter gaps between emitted frames
  uint64_t stale_discarded = 0;
  uint64_t unknown_kind_count = 0;
  uint64_t parse_errors = 0;           // filled by the receive loop
  uint64_t filtered_character = 0;     // datagrams from non-selected characters
  uint64_t unresolved_joint_items = 0; // joint-angle points that match no joint
  double estimated_rate_hz = 0.0;      // frames over the trailing 1 s window
};

struct AssemblerOptions {
  /// Most samples buffered at once; the oldest is finalized beyond this.
  size_t capacity = 8;
  /// A sample is finalized once a datagram arrives for sample >= m + lateness.
  uint32_t lateness_samples = 2;
  /// Assemble only this character id; unset locks onto the first one seen.
  std::optional<uint8_t> character_filter;
  /// Clock used for rate estimation, microseconds. Injected in tests.
  std::function<uint64_t()> now_us;
};

/// Reorders and merges datagrams into complete MotionFrames.
///
/// Datagrams of one sample are buffered per payload kind until either a
/// datagram two samples ahead arrives, the buffer capacity overflows, or
/// flush() is called. At that point the sample is finalized: if every kind
/// seen for it is complete (indices 0..k present, last flag at k) the merged
/// frame is emitted, otherwise the sample is discarded and later shows up as
/// a sample-counter gap. Duplicates are idempotent; datagrams at or before
/// the last finalized sample are discarded as stale. A backward jump greater
/// than 2^31 in the sample counter is treated as wraparound.
class FrameAssembler {
public:
  explicit FrameAssembler(AssemblerOptions options = {});

  /// Feed one parsed datagram; returns the frames this datagram completed
  /// (in sample order). Usually empty or a single frame.
  std::vector<MotionFrame> feed(const Datagram& d);

  /// Finalizes everything still buffered, in sample order.
  std::vector<MotionFrame> flush();

  StreamStats stats() const;
  void add_parse_error() { ++stats_.parse_errors; }

private:
  struct PendingKind {
    std::map<uint8_t, Datagram> parts;  // keyed by datagram index
    int last_index = -1;
    bool complete() const;
  };
  struct PendingSample {
    std::map<uint8_t, PendingKind> kinds;  // keyed by kind code
  };

  std::optional<MotionFrame> finalize(uint32_t sample);
  void note_emission(uint32_t sample);

  AssemblerOptions options_;
  std::map<uint32_t, PendingSample> pending_;
  std::optional<uint32_t> last_finalized_;
  std::optional<uint32_t> last_emitted_;
  std::optional<uint32_t> max_seen_;
  std::optional<uint8_t> locked_character_;
  StreamStats stats_;
  std::deque<uint64_t> emission_times_us_;
};

/// True when a comes strictly before b in wraparound-aware sample order.
constexpr bool sample_before(uint32_t a, uint32_t b) {
  return static_cast<int32_t>(a - b) < 0;
}

}  // namespace xsbridge
