#include "xsbridge/receiver.hpp"

#include <algorithm>
#include <chrono>
#include <cstring>
#include <thread>

namespace xsbridge {

StreamReceiver::StreamReceiver(Endpoint endpoint, ReceiverOptions options)
    : endpoint_(std::move(endpoint)), options_(options), assembler_(options.assembler) {}

void StreamReceiver::run(const FrameHandler& on_frame, const RawHandler& on_raw) {
  stop_.store(false);
  try {
    if (endpoint_.transport == Transport::Udp)
      run_udp(on_frame, on_raw);
    else
      run_tcp(on_frame, on_raw);
  } catch (...) {
    // Deliver whatever was fully received before surfacing the error.
    flush_frames(on_frame);
    throw;
  }
  flush_frames(on_frame);
}

void StreamReceiver::handle_packet(std::span<const uint8_t> bytes, uint64_t recv_us,
                                   const FrameHandler& on_frame, const RawHandler& on_raw) {
  if (on_raw) on_raw(bytes, recv_us);
  Datagram d;
  try {
    d = parse_datagram(bytes);
  } catch (const Error&) {
    std::lock_guard lock(stats_mutex_);
    assembler_.add_parse_error();
    return;
  }
  std::vector<MotionFrame> frames;
  {
    std::lock_guard lock(stats_mutex_);
    frames = assembler_.feed(d);
  }
  for (auto& frame : frames) on_frame(std::move(frame), recv_us);
}

void StreamReceiver::flush_frames(const FrameHandler& on_frame) {
  std::vector<MotionFrame> frames;
  {
    std::lock_guard lock(stats_mutex_);
    frames = assembler_.flush();
  }
  uint64_t now = wall_clock_us();
  for (auto& frame : frames) on_frame(std::move(frame), now);
}

void StreamReceiver::run_udp(const FrameHandler& on_frame, const RawHandler& on_raw) {
  UdpSocket socket = UdpSocket::bind(endpoint_.host, endpoint_.port);
  bound_port_.store(socket.local_port());
  uint64_t last_traffic_us = steady_clock_us();
  bool idle_flushed = false;
  while (!stop_.load()) {
    auto packet = socket.receive(options_.poll_interval_ms);
    if (packet) {
      handle_packet(*packet, wall_clock_us(), on_frame, on_raw);
      last_traffic_us = steady_clock_us();
      idle_flushed = false;
    } else if (options_.idle_flush_ms > 0 && !idle_flushed &&
               steady_clock_us() - last_traffic_us >= uint64_t(options_.idle_flush_ms) * 1000) {
      flush_frames(on_frame);
      idle_flushed = true;
    }
  }
}

void StreamReceiver::run_tcp(const FrameHandler& on_frame, const RawHandler& on_raw) {
  uint32_t attempts_left = options_.reconnect.attempts;
  for (;;) {
    std::optional<TcpStream> stream;
    try {
      stream = TcpStream::connect(endpoint_.host, endpoint_.port);
    } catch (const Error&) {
      if (stop_.load()) return;
      if (attempts_left == 0) throw;
      --attempts_left;
      std::this_thread::sleep_for(std::chrono::milliseconds(options_.reconnect.delay_ms));
      continue;
    }

    ByteBuffer pending;
    uint64_t last_traffic_us = steady_clock_us();
    bool idle_flushed = false;
    bool lost = false;
    while (!stop_.load()) {
      auto chunk = stream->read_some(65536, options_.poll_interval_ms);
      if (!chunk) {  // peer closed or hard error
        lost = true;
        break;
      }
      if (chunk->empty()) {
        if (options_.idle_flush_ms > 0 && !idle_flushed &&
            steady_clock_us() - last_traffic_us >= uint64_t(options_.idle_flush_ms) * 1000) {
          flush_frames(on_frame);
          idle_flushed = true;
        }
        continue;
      }
      last_traffic_us = steady_clock_us();
      idle_flushed = false;
      pending.insert(pending.end(), chunk->begin(), chunk->end());

      // Extract complete datagrams; on garbage, resync to the next magic.
      for (;;) {
        if (pending.size() < kHeaderSize) break;
        if (std::memcmp(pending.data(), kMagic, 4) != 0) {
          auto it = std::search(pending.begin() + 1, pending.end(), kMagic, kMagic + 4);
          if (it == pending.end() && pending.size() > 3)
            it = pending.end() - 3;  // a magic prefix may straddle the chunk boundary
          {
            std::lock_guard lock(stats_mutex_);
            assembler_.add_parse_error();
          }
          pending.erase(pending.begin(), it);
          continue;
        }
        uint16_t payload_size =
            static_cast<uint16_t>(pending[kHeaderSize - 2] << 8 | pending[kHeaderSize - 1]);
        size_t total = kHeaderSize + payload_size;
        if (pending.size() < total) break;
        handle_packet(std::span(pending.data(), total), wall_clock_us(), on_frame, on_raw);
        pending.erase(pending.begin(), pending.begin() + static_cast<long>(total));
      }
    }

    if (!lost || stop_.load()) return;
    if (attempts_left == 0)
      fail(ErrorCode::ConnectionLost, "stream closed by peer, reconnect attempts exhausted");
    --attempts_left;
    std::this_thread::sleep_for(std::chrono::milliseconds(options_.reconnect.delay_ms));
  }
}

StreamStats StreamReceiver::stats() const {
  std::lock_guard lock(stats_mutex_);
  return assembler_.stats();
}

void BoundedFrameQueue::push(MotionFrame&& frame, uint64_t recv_us) {
  {
    std::lock_guard lock(mutex_);
    if (closed_) return;
    if (entries_.size() >= depth_) {
      entries_.pop_front();
      ++overflow_;
    }
    entries_.push_back({std::move(frame), recv_us});
  }
  ready_.notify_one();
}

std::optional<BoundedFrameQueue::Entry> BoundedFrameQueue::pop(int timeout_ms) {
  std::unique_lock lock(mutex_);
  ready_.wait_for(lock, std::chrono::milliseconds(timeout_ms),
                  [&] { return !entries_.empty() || closed_; });
  if (entries_.empty()) return std::nullopt;
  Entry e = std::move(entries_.front());
  entries_.pop_front();
  return e;
}

void BoundedFrameQueue::close() {
  {
    std::lock_guard lock(mutex_);
    closed_ = true;
  }
  ready_.notify_all();
}

uint64_t BoundedFrameQueue::overflow_count() const {
  std::lock_guard lock(mutex_);
  return overflow_;
}

}  // namespace xsbridge
