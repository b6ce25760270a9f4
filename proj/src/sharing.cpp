#include "b3pc/sharing.hpp"

#include <stdexcept>

namespace b3pc {

std::pair<AssShare, AssShare> share(const Ring& ring, Word x, PrgStream& rand) {
  Word r = rand.draw_ring(ring);
  return {AssShare{0, r}, AssShare{1, ring.sub(x, r)}};
}

Word reconstruct(const Ring& ring, const AssShare& s0, const AssShare& s1) {
  if (s0.party == s1.party) throw std::invalid_argument("reconstruct needs one fragment from each party");
  return ring.add(s0.fragment, s1.fragment);
}

AssShare linear_combine(const Ring& ring, std::span<const AssShare> shares, std::span<const Word> coeffs,
                        Word constant) {
  if (shares.size() != coeffs.size()) throw std::invalid_argument("linear_combine size mismatch");
  if (shares.empty()) throw std::invalid_argument("linear_combine needs at least one share");
  int party = shares[0].party;
  Word acc = 0;
  for (std::size_t i = 0; i < shares.size(); ++i) {
    if (shares[i].party != party) throw std::invalid_argument("linear_combine mixes party fragments");
    acc = ring.add(acc, ring.mul(coeffs[i], shares[i].fragment));
  }
  return {party, add_public(ring, party, acc, constant)};
}

Word share_constant(const Ring& ring, int party, Word c, PrgStream& s01) {
  Word r = s01.draw_ring(ring);
  return party == 0 ? r : ring.sub(c, r);
}

TripleLayout TripleLayout::independent(std::size_t count, bool mirror_half) {
  TripleLayout t;
  t.a_count = count;
  t.mirror_half = mirror_half;
  t.a_of_b.resize(count);
  for (std::size_t i = 0; i < count; ++i) t.a_of_b[i] = static_cast<std::uint32_t>(i);
  return t;
}

TripleLayout TripleLayout::shared_a(std::size_t b_count, bool mirror_half) {
  TripleLayout t;
  t.a_count = 1;
  t.mirror_half = mirror_half;
  t.a_of_b.assign(b_count, 0);
  return t;
}

std::size_t TripleLayout::corrections_to_p0() const {
  std::size_t n = 0;
  for (std::size_t j = 0; j < b_count(); ++j) n += mirrored(j) ? 1 : 0;
  return n;
}

namespace {

TripleShares draw_ab(const Ring& ring, const TripleLayout& layout, PrgStream& s) {
  TripleShares t;
  t.a.resize(layout.a_count);
  t.b.resize(layout.b_count());
  t.c.assign(layout.b_count(), 0);
  for (auto& v : t.a) v = s.draw_ring(ring);
  for (auto& v : t.b) v = s.draw_ring(ring);
  return t;
}

}  // namespace

TripleShares derive_triple_p0(const Ring& ring, const TripleLayout& layout, PrgStream& s02) {
  TripleShares t = draw_ab(ring, layout, s02);
  for (std::size_t j = 0; j < layout.b_count(); ++j) {
    if (!layout.mirrored(j)) t.c[j] = s02.draw_ring(ring);
  }
  return t;
}

TripleShares derive_triple_p1(const Ring& ring, const TripleLayout& layout, PrgStream& s12) {
  TripleShares t = draw_ab(ring, layout, s12);
  for (std::size_t j = 0; j < layout.b_count(); ++j) {
    if (layout.mirrored(j)) t.c[j] = s12.draw_ring(ring);
  }
  return t;
}

TripleDealing deal_triple_p2(const Ring& ring, const TripleLayout& layout, PrgStream& s02, PrgStream& s12) {
  TripleDealing d;
  d.p0 = derive_triple_p0(ring, layout, s02);
  d.p1 = derive_triple_p1(ring, layout, s12);
  for (std::size_t j = 0; j < layout.b_count(); ++j) {
    std::uint32_t ai = layout.a_of_b[j];
    Word a = ring.add(d.p0.a[ai], d.p1.a[ai]);
    Word b = ring.add(d.p0.b[j], d.p1.b[j]);
    Word c = ring.mul(a, b);
    if (layout.mirrored(j)) {
      d.p0.c[j] = ring.sub(c, d.p1.c[j]);
      d.to_p0.push_back(d.p0.c[j]);
    } else {
      d.p1.c[j] = ring.sub(c, d.p0.c[j]);
      d.to_p1.push_back(d.p1.c[j]);
    }
  }
  return d;
}

void apply_corrections(TripleShares& mine, int party, const TripleLayout& layout, std::span<const Word> corrections) {
  std::size_t k = 0;
  for (std::size_t j = 0; j < layout.b_count(); ++j) {
    bool mine_missing = (party == 0) == layout.mirrored(j);
    if (!mine_missing) continue;
    if (k >= corrections.size()) throw std::runtime_error("too few triple corrections");
    mine.c[j] = corrections[k++];
  }
  if (k != corrections.size()) throw std::runtime_error("too many triple corrections");
}

}  // namespace b3pc
