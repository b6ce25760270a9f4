#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "b3pc/ring.hpp"

namespace b3pc {

// Frame layout, little-endian:
//   0  magic "B3PC"
//   4  version
//   5  session id (8)
//  13  sender (0..2 parties, 3 client)
//  14  protocol id
//  15  instance id (4)
//  19  round tag
//  20  element count (4)
//  24  payload: count elements of ell/8 bytes, or count raw bytes for text tags
inline constexpr std::size_t kHeaderSize = 24;
inline constexpr std::uint8_t kWireVersion = 1;
inline constexpr std::uint8_t kClientId = 3;

namespace tag {
inline constexpr std::uint8_t hello = 0xF0;   // empty; identifies the connection
inline constexpr std::uint8_t job = 0xF1;     // text: protocol spec and batch as JSON
inline constexpr std::uint8_t input = 0xF2;   // ring elements: the party's input shares
inline constexpr std::uint8_t output = 0xF3;  // ring elements: the party's output shares
inline constexpr std::uint8_t report = 0xF4;  // text: meter JSON
inline constexpr std::uint8_t error = 0xFE;   // text: failure reason
}  // namespace tag

inline bool is_text_tag(std::uint8_t t) { return t == tag::job || t == tag::report || t == tag::error; }

struct WireError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FrameHeader {
  std::uint8_t version = kWireVersion;
  std::uint64_t session = 0;
  std::uint8_t sender = 0;
  std::uint8_t protocol = 0;
  std::uint32_t instance = 0;
  std::uint8_t round = 0;
  std::uint32_t count = 0;

  bool operator==(const FrameHeader&) const = default;
};

std::size_t payload_size(const FrameHeader& h, unsigned elem_bytes);

void encode_header(const FrameHeader& h, std::uint8_t* out);
// Checks magic and version.
FrameHeader decode_header(const std::uint8_t* in);

std::vector<std::uint8_t> encode_frame(FrameHeader h, std::span<const Word> elems, unsigned elem_bytes);
std::vector<std::uint8_t> encode_text_frame(FrameHeader h, const std::string& text);

// Elements wider than elem_bytes are rejected rather than truncated.
void pack_elements(std::span<const Word> elems, unsigned elem_bytes, std::uint8_t* out);
std::vector<Word> unpack_elements(const std::uint8_t* in, std::size_t count, unsigned elem_bytes);

}  // namespace b3pc
