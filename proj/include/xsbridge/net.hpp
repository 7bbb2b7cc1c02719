#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "xsbridge/wire.hpp"

namespace xsbridge {

enum class Transport { Udp, Tcp };

struct Endpoint {
  Transport transport = Transport::Udp;
  std::string host = "0.0.0.0";
  uint16_t port = 9763;

  bool operator==(const Endpoint&) const = default;
};

constexpr uint16_t kDefaultPort = 9763;

/// Parses "udp://host:port" or "tcp://host:port". Throws ConfigError.
Endpoint parse_endpoint(const std::string& text);
std::string endpoint_to_string(const Endpoint& e);

/// Move-only file-descriptor wrapper.
class Socket {
public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  ~Socket();
  Socket(Socket&& other) noexcept;
  Socket& operator=(Socket&& other) noexcept;
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;

  int fd() const { return fd_; }
  bool valid() const { return fd_ >= 0; }
  void close();

private:
  int fd_ = -1;
};

class UdpSocket {
public:
  /// Bound receive socket; throws BindFailed.
  static UdpSocket bind(const std::string& host, uint16_t port);
  /// Unbound send socket targeting host:port; throws SendFailed on resolve.
  static UdpSocket dial(const std::string& host, uint16_t port);

  /// Waits up to timeout_ms and receives one packet; empty on timeout.
  std::optional<ByteBuffer> receive(int timeout_ms);
  /// Sends one packet to the dialed target; throws SendFailed.
  void send(std::span<const uint8_t> data);

  uint16_t local_port() const;

private:
  Socket sock_;
  std::string target_host_;
  uint16_t target_port_ = 0;
};

class TcpStream {
public:
  /// Outbound connection; throws ConnectionLost when the peer is unreachable.
  static TcpStream connect(const std::string& host, uint16_t port);

  /// Reads at most max_len bytes; empty buffer on timeout; nullopt when the
  /// peer closed the connection.
  std::optional<ByteBuffer> read_some(size_t max_len, int timeout_ms);
  void write_all(std::span<const uint8_t> data);

  explicit TcpStream(Socket sock) : sock_(std::move(sock)) {}

private:
  Socket sock_;
};

class TcpListener {
public:
  static TcpListener listen(const std::string& host, uint16_t port);

  /// Empty when no client arrived within the timeout.
  std::optional<TcpStream> accept(int timeout_ms);
  uint16_t local_port() const;

private:
  Socket sock_;
};

/// Microseconds since the Unix epoch (wall clock).
uint64_t wall_clock_us();
/// Monotonic microseconds for pacing and rate measurement.
uint64_t steady_clock_us();

}  // namespace xsbridge
