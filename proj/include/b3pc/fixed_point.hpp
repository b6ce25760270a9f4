#pragma once

#include "b3pc/ring.hpp"

namespace b3pc {

// Signed fixed point with frac_bits fractional bits, complement encoded in the ring.
class FixedPointCodec {
 public:
  explicit FixedPointCodec(const RingParams& params);

  // Rounds to the nearest representable value; out-of-range input throws.
  Word encode(double v) const;
  double decode(Word x) const;
  // Plaintext product followed by a sign-aware rescale by frac_bits.
  Word mul_rescale(Word a, Word b) const;

  double resolution() const;
  const Ring& ring() const { return ring_; }

 private:
  Ring ring_;
  unsigned ellx_;
  unsigned frac_;
};

}  // namespace b3pc
