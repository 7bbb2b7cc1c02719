#pragma once

#include <atomic>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "xsbridge/net.hpp"

namespace xsbridge {

/// Datagram capture file: 8-byte magic "XBRLOG01", then records of
/// { u32 byte length, u64 receive timestamp (microseconds since epoch),
/// raw datagram bytes }, all big-endian, append-only.
constexpr char kLogMagic[9] = "XBRLOG01";

struct LogRecord {
  uint64_t recv_timestamp_us = 0;
  ByteBuffer bytes;

  bool operator==(const LogRecord&) const = default;
};

class LogWriter {
public:
  /// Creates/truncates the file and writes the magic. Throws IoError.
  explicit LogWriter(const std::string& path);
  ~LogWriter();
  LogWriter(LogWriter&&) = default;

  void append(const LogRecord& record);
  void flush();
  uint64_t record_count() const { return count_; }

private:
  struct FileCloser {
    void operator()(std::FILE* f) const { if (f) std::fclose(f); }
  };
  std::unique_ptr<std::FILE, FileCloser> file_;
  uint64_t count_ = 0;
  uint64_t last_timestamp_us_ = 0;
};

/// Sequential reader. Throws BadLogMagic when the file does not start with
/// the magic and IoError on truncated records.
class LogReader {
public:
  explicit LogReader(const std::string& path);

  std::optional<LogRecord> next();

private:
  struct FileCloser {
    void operator()(std::FILE* f) const { if (f) std::fclose(f); }
  };
  std::unique_ptr<std::FILE, FileCloser> file_;
};

std::vector<LogRecord> read_log(const std::string& path);

struct RecordOptions {
  uint64_t max_datagrams = 0;  // 0 = unlimited
  double max_duration_s = 0.0; // 0 = unlimited
  const std::atomic<bool>* stop = nullptr;
};

struct RecordReport {
  uint64_t datagrams_written = 0;
  uint64_t bytes_written = 0;
};

/// Listens on the endpoint and appends every received datagram, bit-exact,
/// until a stop condition fires.
RecordReport record_stream(const Endpoint& endpoint, const std::string& path,
                           const RecordOptions& options);

struct ReplayReport {
  uint64_t datagrams_sent = 0;
  uint64_t bytes_sent = 0;
  double duration_s = 0.0;
};

/// Re-emits a capture preserving inter-record gaps divided by rate_scale
/// (2.0 plays twice as fast). Throws BadLogMagic/IoError on bad files and
/// OutOfRange for a non-positive rate_scale.
ReplayReport replay_log(const std::string& path, const Endpoint& endpoint, double rate_scale = 1.0,
                        const std::atomic<bool>* stop = nullptr);

}  // namespace xsbridge
