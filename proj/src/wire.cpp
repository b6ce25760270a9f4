#include "b3pc/wire.hpp"

#include <bit>
#include <cstring>

namespace b3pc {

namespace {

constexpr std::uint8_t kMagic[4] = {'B', '3', 'P', 'C'};

void put(std::uint8_t* p, std::uint64_t v, unsigned n) {
  for (unsigned i = 0; i < n; ++i) p[i] = static_cast<std::uint8_t>(v >> (8 * i));
}

std::uint64_t get(const std::uint8_t* p, unsigned n) {
  std::uint64_t v = 0;
  for (unsigned i = n; i-- > 0;) v = (v << 8) | p[i];
  return v;
}

}  // namespace

std::size_t payload_size(const FrameHeader& h, unsigned elem_bytes) {
  return static_cast<std::size_t>(h.count) * (is_text_tag(h.round) ? 1 : elem_bytes);
}

void encode_header(const FrameHeader& h, std::uint8_t* out) {
  std::memcpy(out, kMagic, 4);
  out[4] = h.version;
  put(out + 5, h.session, 8);
  out[13] = h.sender;
  out[14] = h.protocol;
  put(out + 15, h.instance, 4);
  out[19] = h.round;
  put(out + 20, h.count, 4);
}

FrameHeader decode_header(const std::uint8_t* in) {
  if (std::memcmp(in, kMagic, 4) != 0) throw WireError("bad frame magic");
  FrameHeader h;
  h.version = in[4];
  if (h.version != kWireVersion) throw WireError("unsupported wire version " + std::to_string(h.version));
  h.session = get(in + 5, 8);
  h.sender = in[13];
  h.protocol = in[14];
  h.instance = static_cast<std::uint32_t>(get(in + 15, 4));
  h.round = in[19];
  h.count = static_cast<std::uint32_t>(get(in + 20, 4));
  if (h.sender > kClientId) throw WireError("bad sender id");
  return h;
}

namespace {

// Little-endian host: an element is its low EB bytes.
template <unsigned EB>
void pack_fixed(std::span<const Word> elems, std::uint8_t* out) {
  for (Word v : elems) {
    if constexpr (EB < 8) {
      if (v >> (8 * EB)) throw WireError("element does not fit the wire width");
    }
    std::memcpy(out, &v, EB);
    out += EB;
  }
}

template <unsigned EB>
void unpack_fixed(const std::uint8_t* in, std::size_t count, Word* out) {
  for (std::size_t i = 0; i < count; ++i) {
    Word v = 0;
    std::memcpy(&v, in + i * EB, EB);
    out[i] = v;
  }
}

}  // namespace

void pack_elements(std::span<const Word> elems, unsigned elem_bytes, std::uint8_t* out) {
  static_assert(std::endian::native == std::endian::little);
  switch (elem_bytes) {
    case 1: return pack_fixed<1>(elems, out);
    case 2: return pack_fixed<2>(elems, out);
    case 3: return pack_fixed<3>(elems, out);
    case 4: return pack_fixed<4>(elems, out);
    case 5: return pack_fixed<5>(elems, out);
    case 6: return pack_fixed<6>(elems, out);
    case 7: return pack_fixed<7>(elems, out);
    case 8: return pack_fixed<8>(elems, out);
    default: throw WireError("element width must be 1 to 8 bytes");
  }
}

std::vector<Word> unpack_elements(const std::uint8_t* in, std::size_t count, unsigned elem_bytes) {
  std::vector<Word> out(count);
  switch (elem_bytes) {
    case 1: unpack_fixed<1>(in, count, out.data()); break;
    case 2: unpack_fixed<2>(in, count, out.data()); break;
    case 3: unpack_fixed<3>(in, count, out.data()); break;
    case 4: unpack_fixed<4>(in, count, out.data()); break;
    case 5: unpack_fixed<5>(in, count, out.data()); break;
    case 6: unpack_fixed<6>(in, count, out.data()); break;
    case 7: unpack_fixed<7>(in, count, out.data()); break;
    case 8: unpack_fixed<8>(in, count, out.data()); break;
    default: throw WireError("element width must be 1 to 8 bytes");
  }
  return out;
}

std::vector<std::uint8_t> encode_frame(FrameHeader h, std::span<const Word> elems, unsigned elem_bytes) {
  if (elems.size() > UINT32_MAX) throw WireError("frame too large");
  h.count = static_cast<std::uint32_t>(elems.size());
  std::vector<std::uint8_t> out(kHeaderSize + elems.size() * elem_bytes);
  encode_header(h, out.data());
  pack_elements(elems, elem_bytes, out.data() + kHeaderSize);
  return out;
}

std::vector<std::uint8_t> encode_text_frame(FrameHeader h, const std::string& text) {
  if (!is_text_tag(h.round)) throw WireError("text payload on a non-text tag");
  h.count = static_cast<std::uint32_t>(text.size());
  std::vector<std::uint8_t> out(kHeaderSize + text.size());
  encode_header(h, out.data());
  std::memcpy(out.data() + kHeaderSize, text.data(), text.size());
  return out;
}

}  // namespace b3pc
