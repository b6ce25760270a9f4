#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "b3pc/prg.hpp"
#include "b3pc/ring.hpp"

namespace b3pc {

// One party's fragment of an additive sharing between P0 and P1.
struct AssShare {
  int party = 0;
  Word fragment = 0;
};

std::pair<AssShare, AssShare> share(const Ring& ring, Word x, PrgStream& rand);
Word reconstruct(const Ring& ring, const AssShare& s0, const AssShare& s1);

// P0 carries public constants; P1 adds nothing.
inline Word add_public(const Ring& ring, int party, Word share, Word c) {
  return party == 0 ? ring.add(share, c) : share;
}

// [x] xor c for a bit-valued secret x and public bit c.
inline Word xor_public(const Ring& ring, int party, Word share, unsigned c) {
  if (c == 0) return share;
  return party == 0 ? ring.sub(1, share) : ring.neg(share);
}

// sum_i coeffs[i] * [x_i] + constant.
AssShare linear_combine(const Ring& ring, std::span<const AssShare> shares, std::span<const Word> coeffs,
                        Word constant = 0);

// [c]0 = r from seed01, [c]1 = c - r. No messages.
Word share_constant(const Ring& ring, int party, Word c, PrgStream& s01);

// Triple layout: a_count distinct `a` masks and one (b, c) per b-slot, where
// c_j = a[a_of_b[j]] * b_j. Several b-slots may share one a.
struct TripleLayout {
  std::size_t a_count = 0;
  std::vector<std::uint32_t> a_of_b;
  bool mirror_half = true;

  static TripleLayout independent(std::size_t count, bool mirror_half = true);
  static TripleLayout shared_a(std::size_t b_count, bool mirror_half = true);

  std::size_t b_count() const { return a_of_b.size(); }
  // Mirrored slots have P0's c fragment sent by P2 instead of P1's.
  bool mirrored(std::size_t j) const { return mirror_half && b_count() >= 2 && j % 2 == 0; }
  std::size_t corrections_to_p0() const;
  std::size_t corrections_to_p1() const { return b_count() - corrections_to_p0(); }
};

struct TripleShares {
  std::vector<Word> a, b, c;
};

// P0 draws a0, b0 and the non-mirrored c0 from its seed02 stream; P1 draws
// a1, b1 and the mirrored c1 from seed12. Missing c fragments stay 0 until the
// correction from P2 arrives.
TripleShares derive_triple_p0(const Ring& ring, const TripleLayout& layout, PrgStream& s02);
TripleShares derive_triple_p1(const Ring& ring, const TripleLayout& layout, PrgStream& s12);

struct TripleDealing {
  TripleShares p0, p1;       // full fragments as P2 sees them
  std::vector<Word> to_p0;   // corrections for mirrored slots, slot order
  std::vector<Word> to_p1;   // corrections for the rest, slot order
};
TripleDealing deal_triple_p2(const Ring& ring, const TripleLayout& layout, PrgStream& s02, PrgStream& s12);

// Fills the missing c fragments of one party from P2's corrections.
void apply_corrections(TripleShares& mine, int party, const TripleLayout& layout, std::span<const Word> corrections);

// Two-party Beaver evaluation once d = x - a and e = y - b are public:
// [xy] = de + d[b] + e[a] + [c].
inline Word beaver_finish(const Ring& ring, int party, Word d, Word e, Word a, Word b, Word c) {
  Word v = ring.add(ring.add(ring.mul(d, b), ring.mul(e, a)), c);
  return add_public(ring, party, v, ring.mul(d, e));
}

}  // namespace b3pc
