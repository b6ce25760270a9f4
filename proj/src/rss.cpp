#include "b3pc/rss.hpp"

#include <stdexcept>

namespace b3pc {

bool rss_fragment(const RssShare& share, int index, Word& out) {
  if (index == share.party) {
    out = share.first;
    return true;
  }
  if (index == rss_next(share.party)) {
    out = share.second;
    return true;
  }
  return false;
}

Word rss_reconstruct(const Ring& ring, const RssShare& a, const RssShare& b) {
  if (a.party == b.party) throw std::invalid_argument("rss_reconstruct needs two distinct parties");
  Word f[3];
  for (int i = 0; i < 3; ++i) {
    Word va = 0, vb = 0;
    bool ha = rss_fragment(a, i, va);
    bool hb = rss_fragment(b, i, vb);
    if (ha && hb && va != vb) throw std::runtime_error("replicated fragments disagree");
    if (!ha && !hb) throw std::logic_error("two parties must cover all fragments");
    f[i] = ha ? va : vb;
  }
  return ring.add(ring.add(f[0], f[1]), f[2]);
}

RssShare rss_add_public(const Ring& ring, const RssShare& s, Word c) {
  RssShare out = s;
  if (s.party == 0) out.first = ring.add(s.first, c);
  if (s.party == 2) out.second = ring.add(s.second, c);
  return out;
}

RssShare rss_add(const Ring& ring, const RssShare& a, const RssShare& b) {
  return {a.party, ring.add(a.first, b.first), ring.add(a.second, b.second)};
}

RssShare rss_sub(const Ring& ring, const RssShare& a, const RssShare& b) {
  return {a.party, ring.sub(a.first, b.first), ring.sub(a.second, b.second)};
}

RssShare rss_scale(const Ring& ring, const RssShare& a, Word c) {
  return {a.party, ring.mul(a.first, c), ring.mul(a.second, c)};
}

void rss_split(const Ring& ring, Word x, PrgStream& rand, RssShare out[3]) {
  Word f[3];
  f[0] = rand.draw_ring(ring);
  f[1] = rand.draw_ring(ring);
  f[2] = ring.sub(ring.sub(x, f[0]), f[1]);
  for (int i = 0; i < 3; ++i) out[i] = {i, f[i], f[rss_next(i)]};
}

Word rss_zero33(const Ring& ring, PrgStream& first, PrgStream& second) {
  // P0: (seed02, seed01), P1: (seed01, seed12), P2: (seed12, seed02).
  Word x = first.draw_ring(ring);
  Word y = second.draw_ring(ring);
  return ring.sub(x, y);
}

RssShare rss_zero23(const Ring& ring, int party, PrgStream& s012) {
  Word a[3];
  for (auto& v : a) v = s012.draw_ring(ring);
  auto z = [&](int i) { return ring.sub(a[i], a[rss_prev(i)]); };
  return {party, z(party), z(rss_next(party))};
}

RssShare rss_share_t(const Ring& ring, int party, unsigned t, PrgStream& s012) {
  RssShare z = rss_zero23(ring, party, s012);
  if (party == 0) z.second = ring.add(z.second, t);
  if (party == 1) z.first = ring.add(z.first, t);
  return z;
}

RssShareS rss_share_s_p2(const Ring& ring, PrgStream& s012, PrgStream& s12, PrgStream& s2, unsigned& s_out) {
  Word s1 = s012.draw_ring(ring);
  Word s2v = s12.draw_ring(ring);
  s_out = s2.draw_bit();
  Word s0 = ring.sub(ring.sub(s_out, s1), s2v);
  return {{2, s2v, s0}, s0};
}

RssShare rss_share_s_p1(const Ring& ring, PrgStream& s012, PrgStream& s12) {
  Word s1 = s012.draw_ring(ring);
  Word s2v = s12.draw_ring(ring);
  return {1, s1, s2v};
}

RssShare rss_share_s_p0(const Ring& ring, PrgStream& s012, Word s0_from_p2) {
  Word s1 = s012.draw_ring(ring);
  return {0, s0_from_p2, s1};
}

Word rss_mul_local(const Ring& ring, const RssShare& x, const RssShare& y, Word zero33) {
  Word v = ring.mul(x.first, y.first);
  v = ring.add(v, ring.mul(x.first, y.second));
  v = ring.add(v, ring.mul(x.second, y.first));
  return ring.add(v, zero33);
}

}  // namespace b3pc
