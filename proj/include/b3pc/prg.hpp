#pragma once

#include <array>
#include <bit>
#include <cstring>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "b3pc/ring.hpp"

namespace b3pc {

enum class SeedLabel : std::uint8_t { S01 = 1, S02 = 2, S12 = 3, S012 = 4, S2 = 5 };

const char* seed_label_name(SeedLabel label);

struct Seed {
  std::array<std::uint8_t, 32> key{};
  SeedLabel label = SeedLabel::S01;

  static Seed from_hex(const std::string& hex, SeedLabel label);
  std::string to_hex() const;
};

// Domain separation for one stream: which protocol, which session, which
// invocation, and which purpose within the invocation.
struct StreamTag {
  std::uint8_t protocol = 0;
  std::uint64_t session = 0;
  std::uint32_t counter = 0;
  std::uint16_t index = 0;
};

// XChaCha20 keystream keyed by the seed, with the tag and label as nonce.
// Single consumer.
static_assert(std::endian::native == std::endian::little);

class PrgStream {
 public:
  PrgStream(const Seed& seed, const StreamTag& tag);

  void fill(std::uint8_t* out, std::size_t n);
  std::uint64_t next_u64();
  // The next n <= 8 keystream bytes, little-endian.
  std::uint64_t next_bytes(unsigned n) {
    if (buf_.size() - pos_ >= 8) {
      std::uint64_t v;
      std::memcpy(&v, buf_.data() + pos_, 8);
      pos_ += n;
      return n == 8 ? v : v & ((std::uint64_t{1} << (8 * n)) - 1);
    }
    return next_bytes_slow(n);
  }
  // Consumes ceil(ell / 8) bytes.
  Word draw_ring(const Ring& ring) { return ring.reduce(next_bytes((ring.bits() + 7) / 8)); }
  Word draw_nonzero(const Ring& ring);
  unsigned draw_bit();
  // Uniform in [0, n), n > 0. Bounds below 2^32 consume 4 bytes per try.
  std::uint64_t uniform_below(std::uint64_t n);
  // Fisher-Yates; out[i] is the source index placed at slot i.
  std::vector<std::uint32_t> permutation(std::size_t n);

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = uniform_below(i);
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  void refill();
  std::uint64_t next_bytes_slow(unsigned n);

  std::array<std::uint8_t, 32> subkey_{};
  std::array<std::uint8_t, 24> nonce_{};
  std::uint64_t block_ = 0;
  std::array<std::uint8_t, 512> buf_{};
  std::size_t pos_ = 512;
  std::uint8_t bits_ = 0;
  unsigned bits_left_ = 0;
};

// The seeds one party holds. Asking for a seed the party does not hold throws,
// so a protocol bug cannot silently read another party's randomness.
class KeyRing {
 public:
  KeyRing() = default;
  KeyRing(int party, std::optional<Seed> s01, std::optional<Seed> s02, std::optional<Seed> s12,
          std::optional<Seed> s012, std::optional<Seed> s2);

  // Keeps only the seeds the given party is entitled to (0: 01,02,012; 1: 01,12,012; 2: 02,12,012,2).
  static KeyRing for_party(int party, const Seed& s01, const Seed& s02, const Seed& s12, const Seed& s012,
                           const Seed& s2);

  int party() const { return party_; }
  bool holds(SeedLabel label) const;
  const Seed& seed(SeedLabel label) const;
  PrgStream stream(SeedLabel label, const StreamTag& tag) const { return PrgStream(seed(label), tag); }

 private:
  int party_ = -1;
  std::array<std::optional<Seed>, 6> seeds_{};
};

// Fresh seed material from the OS.
Seed random_seed(SeedLabel label);

}  // namespace b3pc
