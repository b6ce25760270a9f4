#include <gtest/gtest.h>

#include <random>

#include "b3pc/rss.hpp"
#include "b3pc/session_config.hpp"

using namespace b3pc;

namespace {

const SessionSeeds kSeeds = SessionSeeds::derive("rss");
const StreamTag kTag{17, 3, 4, 5};

PrgStream at(int party, SeedLabel l) { return kSeeds.keys_for(party).stream(l, kTag); }

void split(const Ring& ring, Word x, std::uint64_t seed, RssShare out[3]) {
  Seed s;
  s.key[0] = static_cast<std::uint8_t>(seed);
  s.key[1] = static_cast<std::uint8_t>(seed >> 8);
  PrgStream r(s, kTag);
  rss_split(ring, x, r, out);
}

}  // namespace

TEST(Rss, SplitReconstructFromAnyPair) {
  const Ring ring(40);
  for (Word x : {Word{0}, Word{22}, ring.from_signed(-22), ring.mask()}) {
    RssShare s[3];
    split(ring, x, x, s);
    for (int i = 0; i < 3; ++i) {
      EXPECT_EQ(s[i].party, i);
      EXPECT_EQ(s[i].second, s[rss_next(i)].first);  // replication
      for (int j = 0; j < 3; ++j) {
        if (i != j) EXPECT_EQ(rss_reconstruct(ring, s[i], s[j]), x);
      }
    }
  }
}

TEST(Rss, InconsistentReplicationIsRejected) {
  const Ring ring(40);
  RssShare s[3];
  split(ring, 5, 1, s);
  s[1].first ^= 1;
  EXPECT_THROW(rss_reconstruct(ring, s[0], s[1]), std::runtime_error);
  EXPECT_THROW(rss_reconstruct(ring, s[0], s[0]), std::invalid_argument);
}

TEST(Rss, LinearOps) {
  const Ring ring(32);
  RssShare a[3], b[3], out[3];
  split(ring, 30, 2, a);
  split(ring, ring.from_signed(-7), 3, b);
  for (int i = 0; i < 3; ++i) {
    out[i] = rss_add_public(ring, rss_sub(ring, rss_scale(ring, a[i], 2), rss_add(ring, a[i], b[i])), 100);
  }
  EXPECT_EQ(ring.to_signed(rss_reconstruct(ring, out[0], out[2])), 60 - 23 + 100);
  Word f;
  EXPECT_TRUE(rss_fragment(a[0], 1, f));
  EXPECT_EQ(f, a[1].first);
  EXPECT_FALSE(rss_fragment(a[0], 2, f));
}

TEST(Rss, ZeroSharings) {
  const Ring ring(40);
  for (int rep = 0; rep < 3; ++rep) {
    auto p0a = at(0, SeedLabel::S02), p0b = at(0, SeedLabel::S01);
    auto p1a = at(1, SeedLabel::S01), p1b = at(1, SeedLabel::S12);
    auto p2a = at(2, SeedLabel::S12), p2b = at(2, SeedLabel::S02);
    Word z0 = rss_zero33(ring, p0a, p0b), z1 = rss_zero33(ring, p1a, p1b), z2 = rss_zero33(ring, p2a, p2b);
    EXPECT_EQ(ring.add(ring.add(z0, z1), z2), 0u);
    EXPECT_NE(z0, 0u);

    RssShare z[3];
    for (int p = 0; p < 3; ++p) {
      auto s = at(p, SeedLabel::S012);
      z[p] = rss_zero23(ring, p, s);
    }
    EXPECT_EQ(rss_reconstruct(ring, z[0], z[1]), 0u);
    EXPECT_EQ(rss_reconstruct(ring, z[1], z[2]), 0u);
  }
}

TEST(Rss, SharingOfPairBitT) {
  const Ring ring(40);
  for (unsigned t : {0u, 1u}) {
    RssShare s[3];
    for (int p = 0; p < 3; ++p) {
      auto st = at(p, SeedLabel::S012);
      s[p] = rss_share_t(ring, p, p == 2 ? 0 : t, st);  // P2 does not know t
    }
    EXPECT_EQ(rss_reconstruct(ring, s[0], s[1]), t);
    EXPECT_EQ(rss_reconstruct(ring, s[1], s[2]), t);
  }
}

TEST(Rss, SharingOfHelperBitS) {
  const Ring ring(40);
  auto p2_012 = at(2, SeedLabel::S012), p2_12 = at(2, SeedLabel::S12), p2_2 = at(2, SeedLabel::S2);
  unsigned s = 2;
  auto from2 = rss_share_s_p2(ring, p2_012, p2_12, p2_2, s);
  ASSERT_LE(s, 1u);
  auto p1_012 = at(1, SeedLabel::S012), p1_12 = at(1, SeedLabel::S12);
  auto sh1 = rss_share_s_p1(ring, p1_012, p1_12);
  auto p0_012 = at(0, SeedLabel::S012);
  auto sh0 = rss_share_s_p0(ring, p0_012, from2.to_p0);
  EXPECT_EQ(rss_reconstruct(ring, sh0, sh1), s);
  EXPECT_EQ(rss_reconstruct(ring, sh1, from2.share), s);
  EXPECT_EQ(rss_reconstruct(ring, sh0, from2.share), s);
}

TEST(Rss, MultiplicationWithReshare) {
  const Ring ring(40);
  std::mt19937_64 gen(5);
  for (int i = 0; i < 50; ++i) {
    Word x = ring.reduce(gen()), y = ring.reduce(gen());
    RssShare a[3], b[3];
    split(ring, x, 2 * i, a);
    split(ring, y, 2 * i + 1, b);
    auto p0a = at(0, SeedLabel::S02), p0b = at(0, SeedLabel::S01);
    auto p1a = at(1, SeedLabel::S01), p1b = at(1, SeedLabel::S12);
    auto p2a = at(2, SeedLabel::S12), p2b = at(2, SeedLabel::S02);
    Word c[3] = {rss_mul_local(ring, a[0], b[0], rss_zero33(ring, p0a, p0b)),
                 rss_mul_local(ring, a[1], b[1], rss_zero33(ring, p1a, p1b)),
                 rss_mul_local(ring, a[2], b[2], rss_zero33(ring, p2a, p2b))};
    // party i receives c_{i+1} from its successor
    RssShare out[3];
    for (int p = 0; p < 3; ++p) out[p] = {p, c[p], c[rss_next(p)]};
    ASSERT_EQ(rss_reconstruct(ring, out[0], out[1]), ring.mul(x, y));
    ASSERT_EQ(rss_reconstruct(ring, out[2], out[1]), ring.mul(x, y));
  }
}
