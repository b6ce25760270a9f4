#pragma once

#include <cstdint>
#include <vector>

namespace b3pc {

using Word = std::uint64_t;

// Ring width, input precision and fixed-point fraction bits.
struct RingParams {
  unsigned ell = 40;
  unsigned ellx = 16;
  unsigned frac_bits = 8;

  static RingParams make(unsigned ell, unsigned ellx) { return {ell, ellx, ellx / 2}; }

  // Throws std::invalid_argument. The wire additionally needs ell % 8 == 0.
  void validate(bool for_wire = false) const;
  unsigned wire_bytes() const { return ell / 8; }
  bool operator==(const RingParams&) const = default;
};

// Z_{2^ell} on masked 64-bit words.
class Ring {
 public:
  explicit Ring(unsigned ell);

  unsigned bits() const { return ell_; }
  Word mask() const { return mask_; }

  Word reduce(Word v) const { return v & mask_; }
  Word add(Word a, Word b) const { return (a + b) & mask_; }
  Word sub(Word a, Word b) const { return (a - b) & mask_; }
  Word mul(Word a, Word b) const { return (a * b) & mask_; }
  Word neg(Word a) const { return (Word{0} - a) & mask_; }
  // Logical shift, no sign extension. k >= ell throws.
  Word rshift(Word x, unsigned k) const {
    if (k >= ell_) throw_bad_shift(k);
    return (x & mask_) >> k;
  }

  // Complement encoding: v < 0 maps to q - |v|.
  Word from_signed(std::int64_t v) const { return static_cast<Word>(v) & mask_; }
  // Values in the upper half of the ring read back as negative.
  std::int64_t to_signed(Word x) const;

  bool operator==(const Ring& o) const { return ell_ == o.ell_; }

 private:
  [[noreturn]] void throw_bad_shift(unsigned k) const;

  unsigned ell_;
  Word mask_;
};

// A value tagged with its ring width; arithmetic across widths is rejected.
struct RingElement {
  Word value = 0;
  unsigned ell = 0;

  RingElement() = default;
  RingElement(Word v, unsigned bits);
};

RingElement ring_add(const RingElement& a, const RingElement& b);
RingElement ring_sub(const RingElement& a, const RingElement& b);
RingElement ring_mul(const RingElement& a, const RingElement& b);
RingElement rshift(const RingElement& x, unsigned k);

// Position of the highest set bit plus one; 0 for 0.
unsigned effective_bit_length(Word xi);

// Input range [0, 2^ellx) U (q - 2^ellx, q).
bool in_input_range(const Ring& ring, unsigned ellx, Word x);
bool is_negative_input(const Ring& ring, unsigned ellx, Word x);
// Magnitude xi of an in-range value.
Word magnitude(const Ring& ring, unsigned ellx, Word x);

Word encode_signed(const Ring& ring, unsigned ellx, std::int64_t v);
std::int64_t decode_signed(const Ring& ring, unsigned ellx, Word x);

}  // namespace b3pc
