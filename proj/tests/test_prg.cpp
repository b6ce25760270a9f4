#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

#include "b3pc/prg.hpp"
#include "b3pc/session_config.hpp"

using namespace b3pc;

namespace {

Seed counting_seed(SeedLabel label) {
  Seed s;
  for (int i = 0; i < 32; ++i) s.key[i] = static_cast<std::uint8_t>(i);
  s.label = label;
  return s;
}

StreamTag vector_tag() {
  StreamTag t;
  t.protocol = 5;
  t.session = 0x0102030405060708ULL;
  t.counter = 9;
  t.index = 3;
  return t;
}

std::string hex(const std::vector<std::uint8_t>& v) {
  static const char* d = "0123456789abcdef";
  std::string s;
  for (auto b : v) {
    s += d[b >> 4];
    s += d[b & 15];
  }
  return s;
}

}  // namespace

// Expected bytes come from a separate HChaCha20 + ChaCha20 computation
// (tests/vectors/xchacha_vector.py), not from libsodium.
TEST(Prg, KeystreamMatchesIndependentVector) {
  PrgStream s(counting_seed(SeedLabel::S12), vector_tag());
  std::vector<std::uint8_t> first(48), skip(512 - 48), boundary(48);
  s.fill(first.data(), first.size());
  s.fill(skip.data(), skip.size());
  s.fill(boundary.data(), boundary.size());
  EXPECT_EQ(hex(first),
            "1cd245445f6440a42261a06cf795bdb815a9ae726737089aefc25f8f6313d7b7"
            "9b0ec9c5de4cd34ea918fd2fceccc9dd");
  EXPECT_EQ(hex(boundary),
            "5da598b88434b5ca7f1af7c64d32a3d3661cd96e83fdd59f3383122272a8fbe2"
            "158a69c0e18da542e475734d68131359");
}

TEST(Prg, SameTagSameStreamOnEveryHolder) {
  auto seeds = SessionSeeds::derive("prg-test");
  StreamTag tag = vector_tag();
  auto a = seeds.keys_for(0).stream(SeedLabel::S01, tag);
  auto b = seeds.keys_for(1).stream(SeedLabel::S01, tag);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(Prg, EveryTagFieldSeparatesStreams) {
  const Seed seed = counting_seed(SeedLabel::S01);
  std::set<std::uint64_t> heads;
  StreamTag base = vector_tag();
  std::vector<StreamTag> tags(5, base);
  tags[1].protocol ^= 1;
  tags[2].session ^= 1;
  tags[3].counter ^= 1;
  tags[4].index ^= 1;
  for (const auto& t : tags) heads.insert(PrgStream(seed, t).next_u64());
  Seed other = seed;
  other.label = SeedLabel::S02;  // same key, different label
  heads.insert(PrgStream(other, base).next_u64());
  EXPECT_EQ(heads.size(), 6u);
}

TEST(Prg, KeyRingHoldsOnlyEntitledSeeds) {
  auto seeds = SessionSeeds::derive("kr");
  const std::map<int, std::set<SeedLabel>> entitled = {
      {0, {SeedLabel::S01, SeedLabel::S02, SeedLabel::S012}},
      {1, {SeedLabel::S01, SeedLabel::S12, SeedLabel::S012}},
      {2, {SeedLabel::S02, SeedLabel::S12, SeedLabel::S012, SeedLabel::S2}},
  };
  for (const auto& [party, labels] : entitled) {
    auto kr = seeds.keys_for(party);
    for (auto l : {SeedLabel::S01, SeedLabel::S02, SeedLabel::S12, SeedLabel::S012, SeedLabel::S2}) {
      EXPECT_EQ(kr.holds(l), labels.count(l) == 1) << party << " " << seed_label_name(l);
      if (!labels.count(l)) EXPECT_THROW(kr.seed(l), std::logic_error);
    }
  }
}

TEST(Prg, UniformBelowIsUnbiased) {
  PrgStream s(counting_seed(SeedLabel::S2), StreamTag{});
  const std::uint64_t n = 6;
  const int draws = 60000;
  std::vector<int> count(n);
  for (int i = 0; i < draws; ++i) ++count[s.uniform_below(n)];
  double chi2 = 0, expect = double(draws) / n;
  for (int c : count) chi2 += (c - expect) * (c - expect) / expect;
  EXPECT_LT(chi2, 20.5);  // 5 dof, p ~ 0.001
}

TEST(Prg, NonzeroAndBits) {
  PrgStream s(counting_seed(SeedLabel::S01), StreamTag{});
  const Ring tiny(2);
  int ones = 0;
  for (int i = 0; i < 20000; ++i) {
    ASSERT_NE(s.draw_nonzero(tiny), 0u);
    ones += s.draw_bit();
  }
  EXPECT_NEAR(ones / 20000.0, 0.5, 0.02);
}

TEST(Prg, PermutationsAreUniform) {
  PrgStream s(counting_seed(SeedLabel::S01), StreamTag{});
  std::map<std::vector<std::uint32_t>, int> seen;
  const int draws = 24000;
  for (int i = 0; i < draws; ++i) {
    auto p = s.permutation(4);
    auto sorted = p;
    std::sort(sorted.begin(), sorted.end());
    ASSERT_EQ(sorted, (std::vector<std::uint32_t>{0, 1, 2, 3}));
    ++seen[p];
  }
  ASSERT_EQ(seen.size(), 24u);
  double chi2 = 0, expect = draws / 24.0;
  for (auto& [p, c] : seen) chi2 += (c - expect) * (c - expect) / expect;
  EXPECT_LT(chi2, 49.7);  // 23 dof, p ~ 0.001
}

TEST(Prg, SeedHexRoundTrip) {
  Seed s = counting_seed(SeedLabel::S02);
  EXPECT_EQ(Seed::from_hex(s.to_hex(), SeedLabel::S02).key, s.key);
  EXPECT_THROW(Seed::from_hex("abc", SeedLabel::S02), std::invalid_argument);
  EXPECT_THROW(Seed::from_hex(std::string(64, 'z'), SeedLabel::S02), std::invalid_argument);
}

TEST(Prg, RingDrawsUseTheRingWidth) {
  const Seed seed = Seed::from_hex(std::string(64, '7'), SeedLabel::S01);
  PrgStream bytes(seed, StreamTag{}), draws(seed, StreamTag{});
  std::uint8_t raw[5 + 2 + 8];
  bytes.fill(raw, sizeof raw);
  auto le = [&](int from, int n) {
    std::uint64_t v = 0;
    for (int i = n - 1; i >= 0; --i) v = (v << 8) | raw[from + i];
    return v;
  };
  EXPECT_EQ(draws.draw_ring(Ring(40)), le(0, 5));
  EXPECT_EQ(draws.draw_ring(Ring(12)), le(5, 2) & 0xFFF);
  EXPECT_EQ(draws.draw_ring(Ring(64)), le(7, 8));
}
