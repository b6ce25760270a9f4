#include "b3pc/prg.hpp"

#include <sodium.h>

#include <algorithm>
#include <limits>
#include <mutex>
#include <stdexcept>

namespace b3pc {

namespace {

void ensure_sodium() {
  static std::once_flag once;
  std::call_once(once, [] {
    if (sodium_init() < 0) throw std::runtime_error("libsodium initialisation failed");
  });
}

void put_le(std::uint8_t* p, std::uint64_t v, int n) {
  for (int i = 0; i < n; ++i) p[i] = static_cast<std::uint8_t>(v >> (8 * i));
}

const std::array<std::uint8_t, 512> kZeros{};

}  // namespace

const char* seed_label_name(SeedLabel label) {
  switch (label) {
    case SeedLabel::S01: return "s01";
    case SeedLabel::S02: return "s02";
    case SeedLabel::S12: return "s12";
    case SeedLabel::S012: return "s012";
    case SeedLabel::S2: return "s2";
  }
  return "?";
}

Seed Seed::from_hex(const std::string& hex, SeedLabel label) {
  ensure_sodium();
  Seed s;
  s.label = label;
  std::size_t bin_len = 0;
  if (hex.size() != 64 ||
      sodium_hex2bin(s.key.data(), s.key.size(), hex.data(), hex.size(), nullptr, &bin_len, nullptr) != 0 ||
      bin_len != 32) {
    throw std::invalid_argument(std::string("seed ") + seed_label_name(label) + " must be 64 hex characters");
  }
  return s;
}

std::string Seed::to_hex() const {
  std::string out(65, '\0');
  sodium_bin2hex(out.data(), out.size(), key.data(), key.size());
  out.resize(64);
  return out;
}

PrgStream::PrgStream(const Seed& seed, const StreamTag& tag) {
  ensure_sodium();
  nonce_[0] = tag.protocol;
  put_le(&nonce_[1], tag.session, 8);
  put_le(&nonce_[9], tag.counter, 4);
  put_le(&nonce_[13], tag.index, 2);
  nonce_[15] = static_cast<std::uint8_t>(seed.label);
  // XChaCha20 is ChaCha20 under the HChaCha20 subkey; deriving it once keeps
  // refills to the block function.
  crypto_core_hchacha20(subkey_.data(), nonce_.data(), seed.key.data(), nullptr);
}

void PrgStream::refill() {
  crypto_stream_chacha20_xor_ic(buf_.data(), kZeros.data(), buf_.size(), nonce_.data() + 16, block_, subkey_.data());
  block_ += buf_.size() / 64;
  pos_ = 0;
}

void PrgStream::fill(std::uint8_t* out, std::size_t n) {
  while (n > 0) {
    if (pos_ == buf_.size()) refill();
    std::size_t take = std::min(n, buf_.size() - pos_);
    std::copy_n(buf_.data() + pos_, take, out);
    pos_ += take;
    out += take;
    n -= take;
  }
}

// Near the end of the buffer; may straddle a refill.
std::uint64_t PrgStream::next_bytes_slow(unsigned n) {
  std::uint8_t b[8] = {};
  fill(b, n);
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

std::uint64_t PrgStream::next_u64() { return next_bytes(8); }

Word PrgStream::draw_nonzero(const Ring& ring) {
  for (;;) {
    Word v = draw_ring(ring);
    if (v != 0) return v;
  }
}

unsigned PrgStream::draw_bit() {
  if (bits_left_ == 0) {
    fill(&bits_, 1);
    bits_left_ = 8;
  }
  unsigned b = bits_ & 1u;
  bits_ >>= 1;
  --bits_left_;
  return b;
}

std::uint64_t PrgStream::uniform_below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_below(0)");
  if (n <= (std::uint64_t{1} << 32)) {
    const std::uint64_t span = std::uint64_t{1} << 32;
    const std::uint64_t limit = span - span % n;
    for (;;) {
      std::uint64_t v = next_bytes(4);
      if (v < limit) return v % n;
    }
  }
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = max - (max % n + 1) % n;
  for (;;) {
    std::uint64_t v = next_u64();
    if (v <= limit) return v % n;
  }
}

std::vector<std::uint32_t> PrgStream::permutation(std::size_t n) {
  std::vector<std::uint32_t> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<std::uint32_t>(i);
  shuffle(p);
  return p;
}

KeyRing::KeyRing(int party, std::optional<Seed> s01, std::optional<Seed> s02, std::optional<Seed> s12,
                 std::optional<Seed> s012, std::optional<Seed> s2)
    : party_(party) {
  seeds_[static_cast<int>(SeedLabel::S01)] = std::move(s01);
  seeds_[static_cast<int>(SeedLabel::S02)] = std::move(s02);
  seeds_[static_cast<int>(SeedLabel::S12)] = std::move(s12);
  seeds_[static_cast<int>(SeedLabel::S012)] = std::move(s012);
  seeds_[static_cast<int>(SeedLabel::S2)] = std::move(s2);
}

KeyRing KeyRing::for_party(int party, const Seed& s01, const Seed& s02, const Seed& s12, const Seed& s012,
                           const Seed& s2) {
  switch (party) {
    case 0: return KeyRing(0, s01, s02, std::nullopt, s012, std::nullopt);
    case 1: return KeyRing(1, s01, std::nullopt, s12, s012, std::nullopt);
    case 2: return KeyRing(2, std::nullopt, s02, s12, s012, s2);
    default: throw std::invalid_argument("party id must be 0, 1 or 2");
  }
}

bool KeyRing::holds(SeedLabel label) const { return seeds_[static_cast<int>(label)].has_value(); }

const Seed& KeyRing::seed(SeedLabel label) const {
  const auto& s = seeds_[static_cast<int>(label)];
  if (!s) {
    throw std::logic_error("party " + std::to_string(party_) + " does not hold seed " + seed_label_name(label));
  }
  return *s;
}

Seed random_seed(SeedLabel label) {
  ensure_sodium();
  Seed s;
  s.label = label;
  randombytes_buf(s.key.data(), s.key.size());
  return s;
}

}  // namespace b3pc
