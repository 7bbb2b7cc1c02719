#include "xsbridge/logfile.hpp"

#include <cmath>
#include <cstring>
#include <thread>

#include "xsbridge/errors.hpp"
#include "xsbridge/receiver.hpp"
#include "xsbridge/streamer.hpp"

namespace xsbridge {

namespace {

void write_exact(std::FILE* f, const void* data, size_t len, const char* what) {
  if (std::fwrite(data, 1, len, f) != len)
    fail(ErrorCode::IoError, std::string("short write: ") + what);
}

void put_u32(std::FILE* f, uint32_t v) {
  uint8_t b[4] = {static_cast<uint8_t>(v >> 24), static_cast<uint8_t>(v >> 16),
                  static_cast<uint8_t>(v >> 8), static_cast<uint8_t>(v)};
  write_exact(f, b, 4, "u32");
}

void put_u64(std::FILE* f, uint64_t v) {
  put_u32(f, static_cast<uint32_t>(v >> 32));
  put_u32(f, static_cast<uint32_t>(v));
}

bool get_bytes(std::FILE* f, void* out, size_t len) {
  return std::fread(out, 1, len, f) == len;
}

}  // namespace

LogWriter::LogWriter(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) fail(ErrorCode::IoError, "cannot open " + path + " for writing");
  file_.reset(f);
  write_exact(f, kLogMagic, 8, "magic");
}

LogWriter::~LogWriter() = default;

void LogWriter::append(const LogRecord& record) {
  if (record.bytes.size() > 0xFFFFFFFFull) fail(ErrorCode::IoError, "record too large");
  // Timestamps are strictly increasing within a file; bump duplicates and
  // clock regressions by a microsecond.
  uint64_t ts = record.recv_timestamp_us;
  if (count_ > 0 && ts <= last_timestamp_us_) ts = last_timestamp_us_ + 1;
  put_u32(file_.get(), static_cast<uint32_t>(record.bytes.size()));
  put_u64(file_.get(), ts);
  write_exact(file_.get(), record.bytes.data(), record.bytes.size(), "datagram bytes");
  last_timestamp_us_ = ts;
  ++count_;
}

void LogWriter::flush() {
  if (std::fflush(file_.get()) != 0) fail(ErrorCode::IoError, "flush failed");
}

LogReader::LogReader(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) fail(ErrorCode::IoError, "cannot open " + path + " for reading");
  file_.reset(f);
  char magic[8];
  if (!get_bytes(f, magic, 8) || std::memcmp(magic, kLogMagic, 8) != 0)
    fail(ErrorCode::BadLogMagic, path + " does not start with " + kLogMagic);
}

std::optional<LogRecord> LogReader::next() {
  uint8_t len_bytes[4];
  if (!get_bytes(file_.get(), len_bytes, 4)) return std::nullopt;  // clean EOF
  uint32_t len = static_cast<uint32_t>(len_bytes[0]) << 24 | static_cast<uint32_t>(len_bytes[1]) << 16 |
                 static_cast<uint32_t>(len_bytes[2]) << 8 | static_cast<uint32_t>(len_bytes[3]);
  uint8_t ts_bytes[8];
  if (!get_bytes(file_.get(), ts_bytes, 8)) fail(ErrorCode::IoError, "truncated record header");
  uint64_t ts = 0;
  for (uint8_t b : ts_bytes) ts = ts << 8 | b;
  LogRecord record;
  record.recv_timestamp_us = ts;
  record.bytes.resize(len);
  if (!get_bytes(file_.get(), record.bytes.data(), len))
    fail(ErrorCode::IoError, "truncated record body");
  return record;
}

std::vector<LogRecord> read_log(const std::string& path) {
  LogReader reader(path);
  std::vector<LogRecord> records;
  while (auto r = reader.next()) records.push_back(std::move(*r));
  return records;
}

RecordReport record_stream(const Endpoint& endpoint, const std::string& path,
                           const RecordOptions& options) {
  LogWriter writer(path);
  RecordReport report;
  StreamReceiver receiver(endpoint);

  std::atomic<bool> done{false};
  std::thread watchdog;
  if (options.max_duration_s > 0.0 || options.stop) {
    watchdog = std::thread([&] {
      uint64_t deadline = options.max_duration_s > 0.0
                              ? steady_clock_us() + static_cast<uint64_t>(options.max_duration_s * 1e6)
                              : UINT64_MAX;
      while (!done.load()) {
        if (steady_clock_us() >= deadline || (options.stop && options.stop->load())) {
          receiver.stop();
          break;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(20));
      }
    });
  }

  receiver.run([](MotionFrame&&, uint64_t) {},
               [&](std::span<const uint8_t> bytes, uint64_t recv_us) {
                 writer.append({recv_us, ByteBuffer(bytes.begin(), bytes.end())});
                 ++report.datagrams_written;
                 report.bytes_written += bytes.size();
                 if (options.max_datagrams && report.datagrams_written >= options.max_datagrams)
                   receiver.stop();
               });

  done.store(true);
  if (watchdog.joinable()) watchdog.join();
  writer.flush();
  return report;
}

ReplayReport replay_log(const std::string& path, const Endpoint& endpoint, double rate_scale,
                        const std::atomic<bool>* stop) {
  if (!(rate_scale > 0.0) || !std::isfinite(rate_scale))
    fail(ErrorCode::OutOfRange, "rate_scale must be positive");
  std::vector<LogRecord> records = read_log(path);

  DatagramSender sender(endpoint);
  ReplayReport report;
  const uint64_t start_us = steady_clock_us();
  const uint64_t base_ts = records.empty() ? 0 : records.front().recv_timestamp_us;
  for (const auto& record : records) {
    if (stop && stop->load()) break;
    uint64_t due =
        start_us + static_cast<uint64_t>((record.recv_timestamp_us - base_ts) / rate_scale);
    uint64_t now = steady_clock_us();
    if (now < due) std::this_thread::sleep_for(std::chrono::microseconds(due - now));
    sender.send(record.bytes);
    ++report.datagrams_sent;
    report.bytes_sent += record.bytes.size();
  }
  report.duration_s = (steady_clock_us() - start_us) / 1e6;
  return report;
}

}  // namespace xsbridge
