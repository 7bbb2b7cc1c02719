#pragma once

#include <atomic>
#include <condition_variable>
#include <deque>
#include <functional>
#include <mutex>

#include "xsbridge/assembler.hpp"
#include "xsbridge/net.hpp"

namespace xsbridge {

struct ReconnectPolicy {
  uint32_t attempts = 3;  // 0 disables reconnection
  uint32_t delay_ms = 500;
};

struct ReceiverOptions {
  AssemblerOptions assembler;
  ReconnectPolicy reconnect;
  /// Flush pending samples after this long without traffic; 0 disables.
  uint32_t idle_flush_ms = 250;
  /// Poll granularity; also bounds shutdown latency.
  int poll_interval_ms = 50;
};

/// Owns the socket and the assembler. run() blocks until stop() is called
/// (or, for TCP, until the connection is lost and the reconnect policy is
/// exhausted). Complete frames are handed to the frame handler in emission
/// order; every received packet is offered to the raw handler first.
class StreamReceiver {
public:
  using FrameHandler = std::function<void(MotionFrame&&, uint64_t recv_us)>;
  using RawHandler = std::function<void(std::span<const uint8_t>, uint64_t recv_us)>;

  StreamReceiver(Endpoint endpoint, ReceiverOptions options = {});

  /// Bind (UDP) or connect (TCP) happens inside run.
  void run(const FrameHandler& on_frame, const RawHandler& on_raw = {});
  void stop() { stop_.store(true); }

  /// Valid once run() has bound a UDP socket; 0 before that. Useful when
  /// binding to port 0 in tests.
  uint16_t bound_port() const { return bound_port_.load(); }

  StreamStats stats() const;

private:
  void run_udp(const FrameHandler& on_frame, const RawHandler& on_raw);
  void run_tcp(const FrameHandler& on_frame, const RawHandler& on_raw);
  void handle_packet(std::span<const uint8_t> bytes, uint64_t recv_us,
                     const FrameHandler& on_frame, const RawHandler& on_raw);
  void flush_frames(const FrameHandler& on_frame);

  Endpoint endpoint_;
  ReceiverOptions options_;
  FrameAssembler assembler_;
  std::atomic<bool> stop_{false};
  std::atomic<uint16_t> bound_port_{0};
  mutable std::mutex stats_mutex_;
};

/// Bounded handoff between the receive loop and a consumer thread.
/// Drop-oldest on overflow; dropped frames are counted.
class BoundedFrameQueue {
public:
  struct Entry {
    MotionFrame frame;
    uint64_t recv_us = 0;
  };

  explicit BoundedFrameQueue(size_t depth = 256) : depth_(depth == 0 ? 1 : depth) {}

  void push(MotionFrame&& frame, uint64_t recv_us);
  /// Empty once closed and drained.
  std::optional<Entry> pop(int timeout_ms);
  void close();

  uint64_t overflow_count() const;

private:
  size_t depth_;
  mutable std::mutex mutex_;
  std::condition_variable ready_;
  std::deque<Entry> entries_;
  uint64_t overflow_ = 0;
  bool closed_ = false;
};

}  // namespace xsbridge
