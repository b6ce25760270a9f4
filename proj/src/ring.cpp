#include "b3pc/ring.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace b3pc {

void RingParams::validate(bool for_wire) const {
  if (ell == 0 || ell > 64) throw std::invalid_argument("ell must be in [1, 64]");
  if (ell <= ellx + 1) throw std::invalid_argument("ell must exceed ellx + 1");
  if (ellx == 0) throw std::invalid_argument("ellx must be positive");
  if (frac_bits > ellx / 2) throw std::invalid_argument("frac_bits must be at most ellx / 2");
  if (for_wire && ell % 8 != 0) throw std::invalid_argument("ell must be a multiple of 8 on the wire");
}

Ring::Ring(unsigned ell) : ell_(ell), mask_(ell >= 64 ? ~Word{0} : (Word{1} << ell) - 1) {
  if (ell == 0 || ell > 64) throw std::invalid_argument("ring width must be in [1, 64]");
}

void Ring::throw_bad_shift(unsigned k) const {
  throw std::invalid_argument("shift count " + std::to_string(k) + " >= ring width");
}

std::int64_t Ring::to_signed(Word x) const {
  x &= mask_;
  if (ell_ == 64) return static_cast<std::int64_t>(x);
  Word half = Word{1} << (ell_ - 1);
  if (x < half) return static_cast<std::int64_t>(x);
  return -static_cast<std::int64_t>((mask_ - x) + 1);
}

RingElement::RingElement(Word v, unsigned bits) : value(Ring(bits).reduce(v)), ell(bits) {}

namespace {
Ring common_ring(const RingElement& a, const RingElement& b) {
  if (a.ell != b.ell) throw std::invalid_argument("ring element width mismatch");
  return Ring(a.ell);
}
}  // namespace

RingElement ring_add(const RingElement& a, const RingElement& b) { return {common_ring(a, b).add(a.value, b.value), a.ell}; }
RingElement ring_sub(const RingElement& a, const RingElement& b) { return {common_ring(a, b).sub(a.value, b.value), a.ell}; }
RingElement ring_mul(const RingElement& a, const RingElement& b) { return {common_ring(a, b).mul(a.value, b.value), a.ell}; }
RingElement rshift(const RingElement& x, unsigned k) { return {Ring(x.ell).rshift(x.value, k), x.ell}; }

unsigned effective_bit_length(Word xi) { return static_cast<unsigned>(std::bit_width(xi)); }

bool in_input_range(const Ring& ring, unsigned ellx, Word x) {
  x = ring.reduce(x);
  Word bound = Word{1} << ellx;
  return x < bound || ring.neg(x) < bound;
}

bool is_negative_input(const Ring& ring, unsigned ellx, Word x) {
  x = ring.reduce(x);
  return x >= (Word{1} << ellx);
}

Word magnitude(const Ring& ring, unsigned ellx, Word x) {
  return is_negative_input(ring, ellx, x) ? ring.neg(x) : ring.reduce(x);
}

Word encode_signed(const Ring& ring, unsigned ellx, std::int64_t v) {
  std::int64_t bound = std::int64_t{1} << ellx;
  if (v <= -bound || v >= bound) throw std::out_of_range("value " + std::to_string(v) + " outside input precision");
  return ring.from_signed(v);
}

std::int64_t decode_signed(const Ring& ring, unsigned ellx, Word x) {
  if (!in_input_range(ring, ellx, x)) throw std::out_of_range("ring element outside input range");
  return ring.to_signed(x);
}

}  // namespace b3pc
