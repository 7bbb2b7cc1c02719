#include "xsbridge/streamer.hpp"

#include <cmath>
#include <thread>

#include "xsbridge/errors.hpp"

namespace xsbridge {

DatagramSender::DatagramSender(const Endpoint& endpoint, int accept_timeout_ms) {
  if (endpoint.transport == Transport::Udp) {
    udp_ = UdpSocket::dial(endpoint.host, endpoint.port);
  } else {
    TcpListener listener = TcpListener::listen(endpoint.host, endpoint.port);
    auto client = listener.accept(accept_timeout_ms);
    if (!client) fail(ErrorCode::SendFailed, "no TCP client connected in time");
    tcp_.emplace(std::move(*client));
  }
}

void DatagramSender::send(std::span<const uint8_t> bytes) {
  if (tcp_)
    tcp_->write_all(bytes);
  else
    udp_->send(bytes);
}

EmissionReport stream_synthetic(const Endpoint& endpoint, double rate_hz,
                                const MotionScript& script, double duration_s,
                                const StreamerOptions& options) {
  if (!(rate_hz >= 1.0 && rate_hz <= 240.0))
    fail(ErrorCode::OutOfRange, "rate " + std::to_string(rate_hz) + " Hz outside 1..240");
  if (!(duration_s >= 0.0)) fail(ErrorCode::OutOfRange, "duration must be non-negative");
  validate_script(script);

  DatagramSender sender(endpoint);
  const uint64_t frame_total = static_cast<uint64_t>(std::llround(rate_hz * duration_s));
  const double period_us = 1e6 / rate_hz;

  EmissionReport report;
  double jitter_sum_ms = 0.0;
  const uint64_t start_us = steady_clock_us();

  for (uint64_t i = 0; i < frame_total; ++i) {
    if (options.stop && options.stop->load()) break;
    const uint64_t due_us = start_us + static_cast<uint64_t>(std::llround(i * period_us));
    uint64_t now = steady_clock_us();
    if (now < due_us) {
      std::this_thread::sleep_for(std::chrono::microseconds(due_us - now));
      now = steady_clock_us();
    }
    const double late_ms = (now - due_us) / 1000.0;
    report.max_jitter_ms = std::max(report.max_jitter_ms, late_ms);
    jitter_sum_ms += late_ms;

    const double t = static_cast<double>(i) / rate_hz;
    MotionFrame frame = synth_frame(script, t, options.first_sample_counter + static_cast<uint32_t>(i),
                                    static_cast<uint32_t>(std::llround(t * 1000.0)));
    if (i == 0 && options.send_metadata) {
      frame.meta_text = "name=synthetic character=" + std::to_string(script.character_id);
      frame.scale_text = scale_to_text(script.scale);
    }
    for (const Datagram& d : frame_to_datagrams(frame, options.max_payload_bytes)) {
      ByteBuffer bytes = serialize_datagram(d);
      sender.send(bytes);
      ++report.datagrams_sent;
      report.bytes_sent += bytes.size();
    }
    ++report.frames_sent;
  }

  report.duration_s = (steady_clock_us() - start_us) / 1e6;
  report.mean_jitter_ms = report.frames_sent ? jitter_sum_ms / report.frames_sent : 0.0;
  return report;
}

}  // namespace xsbridge
