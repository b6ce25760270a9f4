#pragma once

#include "b3pc/prg.hpp"
#include "b3pc/ring.hpp"

namespace b3pc {

// Party i holds fragments (x_i, x_{i+1 mod 3}).
struct RssShare {
  int party = 0;
  Word first = 0;   // x_i
  Word second = 0;  // x_{i+1}
};

inline int rss_next(int i) { return (i + 1) % 3; }
inline int rss_prev(int i) { return (i + 2) % 3; }

// Reconstructs from any two distinct parties.
Word rss_reconstruct(const Ring& ring, const RssShare& a, const RssShare& b);
// Fragment x_i as held by `share`, if it holds it.
bool rss_fragment(const RssShare& share, int index, Word& out);

// Adds a public constant into fragment 0 (held by P0 and P2).
RssShare rss_add_public(const Ring& ring, const RssShare& s, Word c);
RssShare rss_add(const Ring& ring, const RssShare& a, const RssShare& b);
RssShare rss_sub(const Ring& ring, const RssShare& a, const RssShare& b);
RssShare rss_scale(const Ring& ring, const RssShare& a, Word c);

// Splits x into three fragments with the first two drawn from `rand`.
void rss_split(const Ring& ring, Word x, PrgStream& rand, RssShare out[3]);

// (3,3) zero sharing: z0 = a0 - a1, z1 = a1 - a2, z2 = a2 - a0 with a0 from
// seed02, a1 from seed01, a2 from seed12. Each party passes the two streams it holds.
Word rss_zero33(const Ring& ring, PrgStream& first, PrgStream& second);

// (2,3) zero sharing from seed012: z_i = a_i - a_{i-1}.
RssShare rss_zero23(const Ring& ring, int party, PrgStream& s012);

// (2,3) sharing of t (known to P0 and P1): (z0, z1 + t, z2).
RssShare rss_share_t(const Ring& ring, int party, unsigned t, PrgStream& s012);

// (2,3) sharing of s from P2's seed2: s1 from seed012, s2 from seed12,
// s0 = s - s1 - s2 computed by P2 and sent to P0.
struct RssShareS {
  RssShare share;
  Word to_p0 = 0;  // set on P2 only
};
// P1 and P2 pass their seed12 stream; P2 also passes seed2 and gets to_p0.
// P0 passes s0_from_p2 once it has arrived.
RssShareS rss_share_s_p2(const Ring& ring, PrgStream& s012, PrgStream& s12, PrgStream& s2, unsigned& s_out);
RssShare rss_share_s_p1(const Ring& ring, PrgStream& s012, PrgStream& s12);
RssShare rss_share_s_p0(const Ring& ring, PrgStream& s012, Word s0_from_p2);

// Local step of RSS multiplication: c_i = x_i y_i + x_i y_{i+1} + x_{i+1} y_i + z_i.
// Party i then sends c_i to party i-1 and ends up holding (c_i, c_{i+1}).
Word rss_mul_local(const Ring& ring, const RssShare& x, const RssShare& y, Word zero33);

}  // namespace b3pc
