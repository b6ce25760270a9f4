#pragma once

#include <cstdint>
#include <vector>

namespace b3pc {

// Piecewise linear unit with breakpoints gamma[0..m] and m+2 affine pieces
// alpha[j] * x + beta[j]. Piece 0 covers x < gamma[0], piece j covers
// gamma[j-1] <= x < gamma[j], piece m+1 covers x >= gamma[m].
struct PluSpec {
  std::vector<std::int64_t> gamma;
  std::vector<std::int64_t> alpha;
  std::vector<std::int64_t> beta;
  // Drop the Beaver slot of pieces with alpha == 0. Off by default so the
  // message sizes stay independent of the coefficients.
  bool skip_zero_slopes = false;

  std::size_t m() const { return gamma.size() - 1; }
  std::size_t pieces() const { return gamma.size() + 1; }
  // Throws std::invalid_argument.
  void validate() const;

  // ReLU6 with the cap expressed in units of 2^-frac_bits.
  static PluSpec relu6(unsigned frac_bits = 0);
};

}  // namespace b3pc
