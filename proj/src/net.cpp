#include "b3pc/net.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <thread>

#include "b3pc/wire.hpp"

namespace b3pc {

namespace {

std::string err(const char* what) { return std::string(what) + ": " + std::strerror(errno); }

}  // namespace

TcpStream::TcpStream(int fd) : fd_(fd) {
  int one = 1;
  ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
}

TcpStream::TcpStream(TcpStream&& o) noexcept : fd_(o.fd_) { o.fd_ = -1; }

TcpStream& TcpStream::operator=(TcpStream&& o) noexcept {
  if (this != &o) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = o.fd_;
    o.fd_ = -1;
  }
  return *this;
}

TcpStream::~TcpStream() {
  if (fd_ >= 0) ::close(fd_);
}

TcpStream TcpStream::connect(const std::string& host, std::uint16_t port, int attempts,
                             std::chrono::milliseconds first_backoff) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  std::string service = std::to_string(port);
  if (int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &res); rc != 0) {
    throw NetError("resolve " + host + ": " + ::gai_strerror(rc));
  }
  auto backoff = first_backoff;
  std::string last;
  for (int i = 0; i < attempts; ++i) {
    int fd = ::socket(res->ai_family, res->ai_socktype, res->ai_protocol);
    if (fd < 0) {
      ::freeaddrinfo(res);
      throw NetError(err("socket"));
    }
    if (::connect(fd, res->ai_addr, res->ai_addrlen) == 0) {
      ::freeaddrinfo(res);
      return TcpStream(fd);
    }
    last = err("connect");
    ::close(fd);
    std::this_thread::sleep_for(backoff);
    backoff *= 2;
  }
  ::freeaddrinfo(res);
  throw NetError(host + ":" + service + " unreachable (" + last + ")");
}

void TcpStream::set_timeout(std::chrono::milliseconds t) {
  timeval tv{};
  tv.tv_sec = static_cast<long>(t.count() / 1000);
  tv.tv_usec = static_cast<long>((t.count() % 1000) * 1000);
  ::setsockopt(fd_, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof tv);
  ::setsockopt(fd_, SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof tv);
}

void TcpStream::write_all(const std::uint8_t* data, std::size_t n) {
  while (n > 0) {
    ssize_t k = ::send(fd_, data, n, MSG_NOSIGNAL);
    if (k < 0) {
      if (errno == EINTR) continue;
      throw NetError(err("send"));
    }
    data += k;
    n -= static_cast<std::size_t>(k);
  }
}

void TcpStream::read_exact(std::uint8_t* data, std::size_t n) {
  while (n > 0) {
    ssize_t k = ::recv(fd_, data, n, 0);
    if (k == 0) throw NetError("connection closed by peer");
    if (k < 0) {
      if (errno == EINTR) continue;
      throw NetError(err("recv"));
    }
    data += k;
    n -= static_cast<std::size_t>(k);
  }
}

std::vector<std::uint8_t> TcpStream::recv_frame(unsigned elem_bytes, std::size_t max_payload) {
  std::vector<std::uint8_t> frame(kHeaderSize);
  read_exact(frame.data(), kHeaderSize);
  FrameHeader h = decode_header(frame.data());
  std::size_t payload = payload_size(h, elem_bytes);
  if (payload > max_payload) throw WireError("frame payload too large");
  frame.resize(kHeaderSize + payload);
  read_exact(frame.data() + kHeaderSize, payload);
  return frame;
}

void TcpStream::shutdown() {
  if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
}

TcpListener::TcpListener(TcpListener&& o) noexcept : fd_(o.fd_), port_(o.port_) { o.fd_ = -1; }

TcpListener& TcpListener::operator=(TcpListener&& o) noexcept {
  if (this != &o) {
    close();
    fd_ = o.fd_;
    port_ = o.port_;
    o.fd_ = -1;
  }
  return *this;
}

TcpListener::~TcpListener() { close(); }

TcpListener TcpListener::bind(const std::string& host, std::uint16_t port) {
  TcpListener l;
  l.fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (l.fd_ < 0) throw NetError(err("socket"));
  int one = 1;
  ::setsockopt(l.fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) throw NetError("bad listen address " + host);
  if (::bind(l.fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) throw NetError(err("bind"));
  if (::listen(l.fd_, 64) != 0) throw NetError(err("listen"));
  socklen_t len = sizeof addr;
  ::getsockname(l.fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  l.port_ = ntohs(addr.sin_port);
  return l;
}

std::optional<TcpStream> TcpListener::accept(std::chrono::milliseconds timeout) {
  if (fd_ < 0) throw NetError("listener closed");
  pollfd p{fd_, POLLIN, 0};
  int rc = ::poll(&p, 1, static_cast<int>(timeout.count()));
  if (rc < 0) {
    if (errno == EINTR) return std::nullopt;
    throw NetError(err("poll"));
  }
  if (rc == 0) return std::nullopt;
  int fd = ::accept(fd_, nullptr, nullptr);
  if (fd < 0) {
    if (errno == EINTR || errno == EAGAIN) return std::nullopt;
    throw NetError(err("accept"));
  }
  return TcpStream(fd);
}

void TcpListener::close() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

}  // namespace b3pc
