#pragma once

#include <atomic>
#include <cstdint>

#include "xsbridge/net.hpp"
#include "xsbridge/synth.hpp"

namespace xsbridge {

struct EmissionReport {
  uint64_t frames_sent = 0;
  uint64_t datagrams_sent = 0;
  uint64_t bytes_sent = 0;
  double duration_s = 0.0;
  double max_jitter_ms = 0.0;   // worst deviation from the frame schedule
  double mean_jitter_ms = 0.0;
};

struct StreamerOptions {
  size_t max_payload_bytes = kDefaultMaxPayloadBytes;
  /// Send character metadata and scale text once, with the first sample.
  bool send_metadata = true;
  uint32_t first_sample_counter = 0;
  /// Cooperative cancel; may be null.
  const std::atomic<bool>* stop = nullptr;
};

/// Datagram-oriented sender: plain sendto for UDP; for TCP, listens on the
/// endpoint and serves the first client that connects.
class DatagramSender {
public:
  explicit DatagramSender(const Endpoint& endpoint, int accept_timeout_ms = 10'000);
  void send(std::span<const uint8_t> bytes);

private:
  std::optional<UdpSocket> udp_;
  std::optional<TcpStream> tcp_;
};

/// Emits round(rate_hz * duration_s) synthetic frames to the endpoint with
/// consecutive sample counters, paced on the steady clock. For TCP endpoints
/// the streamer listens and serves the first client that connects.
/// Throws OutOfRange for rate outside 1..240 and SendFailed on socket errors.
EmissionReport stream_synthetic(const Endpoint& endpoint, double rate_hz,
                                const MotionScript& script, double duration_s,
                                const StreamerOptions& options = {});

}  // namespace xsbridge
