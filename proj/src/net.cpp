#include "xsbridge/net.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>

#include "xsbridge/errors.hpp"

namespace xsbridge {

namespace {

constexpr size_t kMaxDatagramSize = 65536;

sockaddr_in resolve_ipv4(const std::string& host, uint16_t port, ErrorCode on_error) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = 0;
  addrinfo* result = nullptr;
  int rc = ::getaddrinfo(host.c_str(), nullptr, &hints, &result);
  if (rc != 0 || result == nullptr)
    fail(on_error, "cannot resolve host '" + host + "': " + gai_strerror(rc));
  sockaddr_in addr{};
  std::memcpy(&addr, result->ai_addr, sizeof(sockaddr_in));
  addr.sin_port = htons(port);
  ::freeaddrinfo(result);
  return addr;
}

bool wait_readable(int fd, int timeout_ms) {
  pollfd p{fd, POLLIN, 0};
  int rc = ::poll(&p, 1, timeout_ms);
  return rc > 0 && (p.revents & (POLLIN | POLLHUP | POLLERR));
}

}  // namespace

Endpoint parse_endpoint(const std::string& text) {
  Endpoint e;
  std::string rest;
  if (text.rfind("udp://", 0) == 0) {
    e.transport = Transport::Udp;
    rest = text.substr(6);
  } else if (text.rfind("tcp://", 0) == 0) {
    e.transport = Transport::Tcp;
    rest = text.substr(6);
  } else {
    fail(ErrorCode::ConfigError, "endpoint must start with udp:// or tcp://: " + text);
  }
  auto colon = rest.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == rest.size())
    fail(ErrorCode::ConfigError, "endpoint needs host:port: " + text);
  e.host = rest.substr(0, colon);
  int port = 0;
  try {
    port = std::stoi(rest.substr(colon + 1));
  } catch (const std::exception&) {
    fail(ErrorCode::ConfigError, "bad port in endpoint: " + text);
  }
  if (port < 1 || port > 65535) fail(ErrorCode::ConfigError, "port outside 1..65535: " + text);
  e.port = static_cast<uint16_t>(port);
  return e;
}

std::string endpoint_to_string(const Endpoint& e) {
  return std::string(e.transport == Transport::Udp ? "udp://" : "tcp://") + e.host + ":" +
         std::to_string(e.port);
}

Socket::~Socket() { close(); }

Socket::Socket(Socket&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }

Socket& Socket::operator=(Socket&& other) noexcept {
  if (this != &other) {
    close();
    fd_ = other.fd_;
    other.fd_ = -1;
  }
  return *this;
}

void Socket::close() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

UdpSocket UdpSocket::bind(const std::string& host, uint16_t port) {
  int fd = ::socket(AF_INET, SOCK_DGRAM, 0);
  if (fd < 0) fail(ErrorCode::BindFailed, std::strerror(errno));
  UdpSocket s;
  s.sock_ = Socket(fd);
  int one = 1;
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  int rcvbuf = 4 * 1024 * 1024;
  ::setsockopt(fd, SOL_SOCKET, SO_RCVBUF, &rcvbuf, sizeof rcvbuf);
  sockaddr_in addr = resolve_ipv4(host, port, ErrorCode::BindFailed);
  if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0)
    fail(ErrorCode::BindFailed, "bind " + host + ":" + std::to_string(port) + ": " + std::strerror(errno));
  return s;
}

UdpSocket UdpSocket::dial(const std::string& host, uint16_t port) {
  int fd = ::socket(AF_INET, SOCK_DGRAM, 0);
  if (fd < 0) fail(ErrorCode::SendFailed, std::strerror(errno));
  UdpSocket s;
  s.sock_ = Socket(fd);
  s.target_host_ = host;
  s.target_port_ = port;
  resolve_ipv4(host, port, ErrorCode::SendFailed);  // fail early on bad host
  return s;
}

std::optional<ByteBuffer> UdpSocket::receive(int timeout_ms) {
  if (!wait_readable(sock_.fd(), timeout_ms)) return std::nullopt;
  ByteBuffer buf(kMaxDatagramSize);
  ssize_t n = ::recvfrom(sock_.fd(), buf.data(), buf.size(), 0, nullptr, nullptr);
  if (n < 0) {
    if (errno == EAGAIN || errno == EWOULDBLOCK || errno == EINTR) return std::nullopt;
    fail(ErrorCode::IoError, std::strerror(errno));
  }
  buf.resize(static_cast<size_t>(n));
  return buf;
}

void UdpSocket::send(std::span<const uint8_t> data) {
  sockaddr_in addr = resolve_ipv4(target_host_, target_port_, ErrorCode::SendFailed);
  ssize_t n = ::sendto(sock_.fd(), data.data(), data.size(), 0,
                       reinterpret_cast<sockaddr*>(&addr), sizeof addr);
  if (n != static_cast<ssize_t>(data.size()))
    fail(ErrorCode::SendFailed, std::strerror(errno));
}

uint16_t UdpSocket::local_port() const {
  sockaddr_in addr{};
  socklen_t len = sizeof addr;
  if (::getsockname(sock_.fd(), reinterpret_cast<sockaddr*>(&addr), &len) != 0)
    fail(ErrorCode::IoError, std::strerror(errno));
  return ntohs(addr.sin_port);
}

TcpStream TcpStream::connect(const std::string& host, uint16_t port) {
  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) fail(ErrorCode::ConnectionLost, std::strerror(errno));
  Socket sock(fd);
  sockaddr_in addr = resolve_ipv4(host, port, ErrorCode::ConnectionLost);
  if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0)
    fail(ErrorCode::ConnectionLost,
         "connect " + host + ":" + std::to_string(port) + ": " + std::strerror(errno));
  return TcpStream(std::move(sock));
}

std::optional<ByteBuffer> TcpStream::read_some(size_t max_len, int timeout_ms) {
  if (!wait_readable(sock_.fd(), timeout_ms)) return ByteBuffer{};
  ByteBuffer buf(max_len);
  ssize_t n = ::recv(sock_.fd(), buf.data(), buf.size(), 0);
  if (n < 0) {
    if (errno == EAGAIN || errno == EWOULDBLOCK || errno == EINTR) return ByteBuffer{};
    return std::nullopt;
  }
  if (n == 0) return std::nullopt;  // orderly shutdown
  buf.resize(static_cast<size_t>(n));
  return buf;
}

void TcpStream::write_all(std::span<const uint8_t> data) {
  size_t sent = 0;
  while (sent < data.size()) {
    ssize_t n = ::send(sock_.fd(), data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n <= 0) {
      if (errno == EINTR) continue;
      fail(ErrorCode::ConnectionLost, std::strerror(errno));
    }
    sent += static_cast<size_t>(n);
  }
}

TcpListener TcpListener::listen(const std::string& host, uint16_t port) {
  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) fail(ErrorCode::BindFailed, std::strerror(errno));
  TcpListener l;
  l.sock_ = Socket(fd);
  int one = 1;
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr = resolve_ipv4(host, port, ErrorCode::BindFailed);
  if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0)
    fail(ErrorCode::BindFailed, "bind " + host + ":" + std::to_string(port) + ": " + std::strerror(errno));
  if (::listen(fd, 4) != 0) fail(ErrorCode::BindFailed, std::strerror(errno));
  return l;
}

std::optional<TcpStream> TcpListener::accept(int timeout_ms) {
  if (!wait_readable(sock_.fd(), timeout_ms)) return std::nullopt;
  int fd = ::accept(sock_.fd(), nullptr, nullptr);
  if (fd < 0) return std::nullopt;
  return TcpStream(Socket(fd));
}

uint16_t TcpListener::local_port() const {
  sockaddr_in addr{};
  socklen_t len = sizeof addr;
  if (::getsockname(sock_.fd(), reinterpret_cast<sockaddr*>(&addr), &len) != 0)
    fail(ErrorCode::IoError, std::strerror(errno));
  return ntohs(addr.sin_port);
}

uint64_t wall_clock_us() {
  return static_cast<uint64_t>(std::chrono::duration_cast<std::chrono::microseconds>(
                                   std::chrono::system_clock::now().time_since_epoch())
                                   .count());
}

uint64_t steady_clock_us() {
  return static_cast<uint64_t>(std::chrono::duration_cast<std::chrono::microseconds>(
                                   std::chrono::steady_clock::now().time_since_epoch())
                                   .count());
}

}  // namespace xsbridge
