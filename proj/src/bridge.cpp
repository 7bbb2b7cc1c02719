#include "xsbridge/bridge.hpp"

#include <cstdio>
#include <mutex>
#include <thread>

#include "xsbridge/errors.hpp"
#include "xsbridge/jsonl.hpp"
#include "xsbridge/logfile.hpp"
#include "xsbridge/urdf.hpp"

namespace xsbridge {

namespace {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::BindFailed:
    case ErrorCode::ConnectionLost:
    case ErrorCode::SendFailed:
      return kExitNetwork;
    case ErrorCode::IoError:
      return kExitSink;
    default:
      return kExitConfig;
  }
}

struct JsonlSink {
  std::FILE* file = nullptr;
  bool owns = false;

  ~JsonlSink() {
    if (file && owns) std::fclose(file);
  }

  void open(const std::string& path) {
    if (path == "-") {
      file = stdout;
      return;
    }
    file = std::fopen(path.c_str(), "wb");
    owns = true;
    if (!file) fail(ErrorCode::IoError, "cannot open jsonl sink " + path);
  }

  void write_line(const std::string& line) {
    if (std::fputs(line.c_str(), file) == EOF || std::fputc('\n', file) == EOF)
      fail(ErrorCode::IoError, "jsonl sink write failed");
    if (file == stdout && std::fflush(file) != 0)
      fail(ErrorCode::IoError, "jsonl sink flush failed");
  }

  void flush() {
    if (file && std::fflush(file) != 0) fail(ErrorCode::IoError, "jsonl sink flush failed");
  }
};

}  // namespace

int run_bridge(const BridgeConfig& config, const std::atomic<bool>* external_stop,
               BridgeReport* report_out) {
  BridgeReport report;

  // URDF emission happens before any networking so a bad height or path
  // fails fast.
  if (config.urdf_path) {
    try {
      UrdfDocument doc =
          generate_urdf(default_topology(), default_scale(config.urdf_height_m), UrdfOptions{});
      std::string xml = render_xml(doc);
      std::FILE* f = std::fopen(config.urdf_path->c_str(), "wb");
      if (!f) fail(ErrorCode::IoError, "cannot open urdf output " + *config.urdf_path);
      size_t written = std::fwrite(xml.data(), 1, xml.size(), f);
      std::fclose(f);
      if (written != xml.size()) fail(ErrorCode::IoError, "short urdf write");
      std::fprintf(stderr, "wrote %s (%d links, %d joints)\n", config.urdf_path->c_str(),
                   static_cast<int>(doc.links.size()), static_cast<int>(doc.joints.size()));
    } catch (const Error& e) {
      std::fprintf(stderr, "urdf: %s\n", e.what());
      return e.code() == ErrorCode::IoError ? kExitSink : kExitConfig;
    }
  }

  JsonlSink jsonl;
  std::optional<LogWriter> log_writer;
  std::optional<UdpSocket> republish;
  try {
    if (config.jsonl_path) jsonl.open(*config.jsonl_path);
    if (config.log_path) log_writer.emplace(*config.log_path);
    if (config.republish) republish = UdpSocket::dial(config.republish->host, config.republish->port);
  } catch (const Error& e) {
    std::fprintf(stderr, "sink setup: %s\n", e.what());
    return kExitSink;
  }

  BoundedFrameQueue queue(config.queue_depth);
  ReceiverOptions receiver_options;
  receiver_options.assembler.character_filter = config.character_filter;
  receiver_options.reconnect = config.reconnect;
  StreamReceiver receiver(config.listen, receiver_options);

  std::mutex error_mutex;
  std::optional<ErrorCode> fatal_code;
  std::string fatal_message;
  auto record_fatal = [&](ErrorCode code, const std::string& message) {
    std::lock_guard lock(error_mutex);
    if (!fatal_code) {
      fatal_code = code;
      fatal_message = message;
    }
  };

  std::thread rx_thread([&] {
    try {
      receiver.run(
          [&](MotionFrame&& frame, uint64_t recv_us) { queue.push(std::move(frame), recv_us); },
          [&](std::span<const uint8_t> bytes, uint64_t recv_us) {
            try {
              if (log_writer) log_writer->append({recv_us, ByteBuffer(bytes.begin(), bytes.end())});
              if (republish) republish->send(bytes);
            } catch (const Error& e) {
              record_fatal(e.code(), e.what());
              receiver.stop();
            }
          });
    } catch (const Error& e) {
      record_fatal(e.code(), e.what());
    }
    queue.close();
  });

  const uint64_t start_us = steady_clock_us();
  const uint64_t deadline_us =
      config.max_seconds > 0.0 ? start_us + static_cast<uint64_t>(config.max_seconds * 1e6) : UINT64_MAX;

  for (;;) {
    if (external_stop && external_stop->load()) break;
    if (steady_clock_us() >= deadline_us) break;
    {
      std::lock_guard lock(error_mutex);
      if (fatal_code) break;
    }

    auto entry = queue.pop(100);
    if (!entry) {
      std::lock_guard lock(error_mutex);
      if (fatal_code) break;
      continue;
    }

    if (config.jsonl_path) {
      try {
        Stamp stamp{entry->recv_us, entry->frame.time_code_ms};
        jsonl.write_line(frame_to_jsonl(entry->frame, stamp, config.axis_remap));
      } catch (const Error& e) {
        if (e.code() == ErrorCode::IncompleteFrame) {
          ++report.frames_incomplete;
          continue;
        }
        record_fatal(e.code(), e.what());
        break;
      }
    }
    ++report.frames_sunk;
    if (config.max_frames > 0 && report.frames_sunk >= config.max_frames) break;
  }

  receiver.stop();
  rx_thread.join();

  // Keep sinking whatever the shutdown flush produced, up to the frame cap.
  while (auto entry = queue.pop(0)) {
    if (config.max_frames > 0 && report.frames_sunk >= config.max_frames) break;
    if (config.jsonl_path) {
      try {
        Stamp stamp{entry->recv_us, entry->frame.time_code_ms};
        jsonl.write_line(frame_to_jsonl(entry->frame, stamp, config.axis_remap));
      } catch (const Error& e) {
        if (e.code() == ErrorCode::IncompleteFrame) {
          ++report.frames_incomplete;
          continue;
        }
        record_fatal(e.code(), e.what());
        break;
      }
    }
    ++report.frames_sunk;
  }

  try {
    jsonl.flush();
    if (log_writer) log_writer->flush();
  } catch (const Error& e) {
    record_fatal(e.code(), e.what());
  }

  report.queue_overflow = queue.overflow_count();
  report.stream = receiver.stats();
  if (report_out) *report_out = report;

  std::fprintf(stderr,
               "bridge: %llu frames sunk, %llu incomplete, %llu queue overflows; "
               "%llu datagrams, %llu emitted, %llu dropped, %llu stale, %llu parse errors\n",
               static_cast<unsigned long long>(report.frames_sunk),
               static_cast<unsigned long long>(report.frames_incomplete),
               static_cast<unsigned long long>(report.queue_overflow),
               static_cast<unsigned long long>(report.stream.datagrams_received),
               static_cast<unsigned long long>(report.stream.frames_emitted),
               static_cast<unsigned long long>(report.stream.frames_dropped),
               static_cast<unsigned long long>(report.stream.stale_discarded),
               static_cast<unsigned long long>(report.stream.parse_errors));

  std::lock_guard lock(error_mutex);
  if (fatal_code) {
    std::fprintf(stderr, "bridge: fatal: %s\n", fatal_message.c_str());
    return exit_code_for(*fatal_code);
  }
  return kExitOk;
}

}  // namespace xsbridge
