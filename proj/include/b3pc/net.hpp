#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace b3pc {

struct NetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Blocking TCP stream carrying length-delimited frames.
class TcpStream {
 public:
  TcpStream() = default;
  explicit TcpStream(int fd);
  TcpStream(TcpStream&& o) noexcept;
  TcpStream& operator=(TcpStream&& o) noexcept;
  TcpStream(const TcpStream&) = delete;
  TcpStream& operator=(const TcpStream&) = delete;
  ~TcpStream();

  // Retries refused connections with doubling backoff, then throws NetError.
  static TcpStream connect(const std::string& host, std::uint16_t port, int attempts = 8,
                           std::chrono::milliseconds first_backoff = std::chrono::milliseconds(25));

  bool valid() const { return fd_ >= 0; }
  void set_timeout(std::chrono::milliseconds t);
  void write_all(const std::uint8_t* data, std::size_t n);
  void read_exact(std::uint8_t* data, std::size_t n);

  void send_frame(const std::vector<std::uint8_t>& frame) { write_all(frame.data(), frame.size()); }
  // Reads one frame; elem_bytes sizes non-text payloads. Frames above
  // max_payload bytes are refused.
  std::vector<std::uint8_t> recv_frame(unsigned elem_bytes, std::size_t max_payload = std::size_t{1} << 30);

  void shutdown();

 private:
  int fd_ = -1;
};

class TcpListener {
 public:
  TcpListener() = default;
  TcpListener(TcpListener&& o) noexcept;
  TcpListener& operator=(TcpListener&& o) noexcept;
  ~TcpListener();

  static TcpListener bind(const std::string& host, std::uint16_t port);
  std::uint16_t port() const { return port_; }
  // Empty on timeout.
  std::optional<TcpStream> accept(std::chrono::milliseconds timeout);
  void close();

 private:
  int fd_ = -1;
  std::uint16_t port_ = 0;
};

}  // namespace b3pc
