#include <gtest/gtest.h>

#include <cctype>

#include "b3pc/client.hpp"
#include "b3pc/fixed_point.hpp"
#include "b3pc/plaintext.hpp"
#include "harness.hpp"

using namespace b3pc;
using harness::i64;

namespace b3pc {
// Keeps gtest from dumping the raw bytes into test names.
void PrintTo(const ProtocolSpec& s, std::ostream* os) { *os << kind_name(s.kind); }
}  // namespace b3pc

namespace {

ProtocolSpec spec_of(const std::string& name) { return ProtocolSpec::named(name); }

std::string param_name(const ProtocolSpec& s, std::size_t index) {
  std::string n = kind_name(s.kind);
  for (auto& c : n)
    if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
  return n + "_" + std::to_string(index);
}

ProtocolSpec dyn(i64 a0, i64 a1) {
  ProtocolSpec s = spec_of("dynrelu");
  s.alpha0 = a0;
  s.alpha1 = a1;
  return s;
}

ProtocolSpec funnel(i64 scale, i64 offset) {
  ProtocolSpec s = spec_of("funnel");
  s.funnel_scale = scale;
  s.funnel_offset = offset;
  return s;
}

ProtocolSpec plu(PluSpec p) {
  ProtocolSpec s;
  s.kind = Kind::plu;
  s.plu = std::move(p);
  return s;
}

// Breakpoints -3, 2, 5 with a zero slope in the middle.
PluSpec four_piece() { return PluSpec{{-3, 2, 5}, {1, 0, 2, -1}, {0, 7, -3, 12}, false}; }

std::vector<std::vector<i64>> all_tuples(const std::vector<i64>& dom, std::size_t arity) {
  std::vector<std::vector<i64>> out;
  harness::for_each_tuple(dom, arity, [&](const std::vector<i64>& t) { out.push_back(t); });
  return out;
}

void expect_clean(const ProtocolSpec& spec, const SessionConfig& cfg, const std::vector<std::vector<i64>>& inst) {
  auto t = harness::run_against_oracle(spec, cfg, inst);
  EXPECT_EQ(t.mismatches, 0u) << t.first_failure;
  EXPECT_EQ(t.instances, inst.size());
}

}  // namespace

class SingleInput : public ::testing::TestWithParam<ProtocolSpec> {};

TEST_P(SingleInput, ExhaustiveSmallDomain) {
  auto spec = GetParam();
  auto cfg = harness::sim_session(32, 5, "single");
  if (is_rss(spec.kind)) cfg.sharing = "rss";
  std::vector<i64> dom = harness::range(-31, 31);
  if (spec.kind == Kind::plu) {
    // keep x - gamma inside the precision
    dom = harness::range(std::max<i64>(-31, spec.plu.gamma.back() - 31), std::min<i64>(31, spec.plu.gamma.front() + 31));
  }
  if (spec.kind == Kind::funnel) dom = harness::range(-15, 15);
  expect_clean(spec, cfg, all_tuples(dom, 1));
}

TEST_P(SingleInput, RandomWideRing) {
  auto spec = GetParam();
  auto cfg = harness::sim_session(64, 32, "wide");
  if (is_rss(spec.kind)) cfg.sharing = "rss";
  expect_clean(spec, cfg, harness::random_instances(spec, 32, 500, 77));
}

INSTANTIATE_TEST_SUITE_P(Kinds, SingleInput,
                         ::testing::Values(spec_of("drelu"), spec_of("msb"), spec_of("relu"), spec_of("abs"),
                                           dyn(3, 1), dyn(-2, 5), funnel(2, 1), funnel(0, 4),
                                           plu(PluSpec::relu6()), plu(four_piece()), spec_of("rss-drelu"),
                                           spec_of("rss-relu")),
                         [](const auto& info) { return param_name(info.param, info.index); });

class MultiInput : public ::testing::TestWithParam<ProtocolSpec> {};

TEST_P(MultiInput, ExhaustiveSmallDomain) {
  auto spec = GetParam();
  auto cfg = harness::sim_session(32, 4, "multi");
  const auto dom = spec.input_arity() <= 3 ? harness::range(-8, 7) : std::vector<i64>{-8, -3, 0, 1, 7};
  expect_clean(spec, cfg, all_tuples(dom, spec.input_arity()));
}

TEST_P(MultiInput, RandomWideRing) {
  auto spec = GetParam();
  auto cfg = harness::sim_session(48, 20, "multi-wide");
  expect_clean(spec, cfg, harness::random_instances(spec, 20, 300, 5));
}

namespace {

ProtocolSpec fast(ProtocolSpec s) {
  s.fast_sort = true;
  return s;
}

}  // namespace

INSTANTIATE_TEST_SUITE_P(Kinds, MultiInput,
                         ::testing::Values(spec_of("ucmp"), spec_of("equality"), spec_of("max2"), spec_of("min2"),
                                           spec_of("max3"), spec_of("min3"), spec_of("max4"), spec_of("min5"),
                                           spec_of("sort2"), spec_of("sort3"), fast(spec_of("sort4")),
                                           fast(spec_of("sort5")), ProtocolSpec::named("sort-asc"), spec_of("med3"),
                                           spec_of("med4"), spec_of("med5")),
                         [](const auto& info) { return param_name(info.param, info.index); });

TEST(Protocols, UcmpLeavesTheVerdictWithP2) {
  auto cfg = harness::sim_session(40, 16, "ucmp");
  auto spec = spec_of("ucmp");
  const Ring ring(40);
  std::vector<Word> in = {5, 3, 3, 5, 7, 7};
  PrgStream rand(cfg.seeds.s2, StreamTag{});
  auto shares = client_share(spec, ring, in, rand);
  auto res = simulate_shares(spec, cfg, shares, 3);
  EXPECT_TRUE(res.outputs[0].empty());
  EXPECT_TRUE(res.outputs[1].empty());
  EXPECT_EQ(res.outputs[2], (std::vector<Word>{1, 0, 1}));
  EXPECT_EQ(res.meter.rounds(), 1);
}

TEST(Protocols, FixedPointReluOfNegativeIsZero) {
  auto cfg = harness::sim_session(40, 16, "fx");
  const FixedPointCodec codec(cfg.params);
  PrgStream rand(cfg.seeds.s2, StreamTag{});
  auto out = simulate_values(spec_of("relu"), cfg, {codec.encode(-6.2265625), codec.encode(22.0)}, rand);
  EXPECT_EQ(codec.decode(out[0]), 0.0);
  EXPECT_EQ(codec.decode(out[1]), 22.0);
}

TEST(Protocols, FixedPointRelu6Preset) {
  auto cfg = harness::sim_session(40, 16, "relu6");
  const FixedPointCodec codec(cfg.params);
  auto spec = ProtocolSpec::named("relu6", cfg.params.frac_bits);
  PrgStream rand(cfg.seeds.s2, StreamTag{});
  std::vector<double> xs = {-3.5, 0.0, 2.25, 5.99609375, 6.0, 100.5};
  std::vector<Word> in;
  for (double x : xs) in.push_back(codec.encode(x));
  auto out = simulate_values(spec, cfg, in, rand);
  std::vector<double> want = {0.0, 0.0, 2.25, 5.99609375, 6.0, 6.0};
  for (std::size_t i = 0; i < xs.size(); ++i) EXPECT_EQ(codec.decode(out[i]), want[i]) << xs[i];
}

TEST(Protocols, SkippingZeroSlopesKeepsResults) {
  auto cfg = harness::sim_session(40, 16, "skip");
  auto p = four_piece();
  p.skip_zero_slopes = true;
  expect_clean(plu(p), cfg, harness::random_instances(plu(p), 16, 300, 3));
  auto with = schedule(plu(four_piece()), cfg.params, 1);
  auto without = schedule(plu(p), cfg.params, 1);
  std::size_t a = 0, b = 0;
  for (auto& t : with) a += t.elements;
  for (auto& t : without) b += t.elements;
  EXPECT_LT(b, a);
}

TEST(Protocols, MeterMatchesScheduleForEveryKind) {
  auto cfg = harness::sim_session(40, 16, "meter");
  for (auto spec : {spec_of("drelu"), spec_of("equality"), spec_of("relu"), plu(four_piece()), spec_of("max9"),
                    spec_of("sort4"), spec_of("med5"), spec_of("rss-relu"), spec_of("rss-drelu")}) {
    if (is_rss(spec.kind)) cfg.sharing = "rss";
    auto inst = harness::random_instances(spec, 16, 7, 1);
    std::vector<Word> values;
    const Ring ring(40);
    for (auto& t : inst)
      for (auto v : t) values.push_back(ring.from_signed(v));
    PrgStream rand(cfg.seeds.s2, StreamTag{});
    SimulationResult detail;
    simulate_values(spec, cfg, values, rand, {}, &detail);
    std::uint64_t per[3][3] = {};
    for (const auto& t : schedule(spec, cfg.params, 7)) per[t.from][t.to] += t.elements;
    for (int f = 0; f < 3; ++f)
      for (int to = 0; to < 3; ++to)
        if (f != to) EXPECT_EQ(detail.meter.elements(f, to), per[f][to]) << kind_name(spec.kind) << f << to;
  }
}

TEST(Protocols, SameSeedsSameTranscript) {
  auto cfg = harness::sim_session(40, 16, "det");
  auto spec = spec_of("max4");
  std::vector<Word> in = {1, 2, 3, 4};
  auto run = [&](std::uint32_t inv) {
    PrgStream rand(cfg.seeds.s2, StreamTag{});
    SimulationOptions o;
    o.invocation = inv;
    SimulationResult d;
    simulate_values(spec, cfg, in, rand, o, &d);
    std::vector<std::vector<std::uint8_t>> frames;
    for (auto& f : d.transcript) frames.push_back(f.bytes);
    return frames;
  };
  EXPECT_EQ(run(1), run(1));
  auto a = run(1), b = run(2);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    // header differs by instance id; payload is fresh randomness
    EXPECT_NE(std::vector<std::uint8_t>(a[i].begin() + 24, a[i].end()),
              std::vector<std::uint8_t>(b[i].begin() + 24, b[i].end()));
  }
}

TEST(Protocols, EnginesRejectMalformedInput) {
  auto cfg = harness::sim_session(40, 16, "bad");
  EngineContext ctx;
  ctx.params = cfg.params;
  ctx.party = 0;
  ctx.keys = cfg.keys_for(0);
  EXPECT_THROW(make_engine(spec_of("relu"), ctx, {1, 2, 3}, 2), std::invalid_argument);
  ctx.party = 2;
  ctx.keys = cfg.keys_for(2);
  EXPECT_THROW(make_engine(spec_of("relu"), ctx, {1}, 1), std::invalid_argument);
  ctx.keys = cfg.keys_for(1);
  EXPECT_THROW(make_engine(spec_of("relu"), ctx, {}, 1), std::invalid_argument);
}

TEST(ProtocolSpec, NamesAndJson) {
  EXPECT_EQ(spec_of("MAX9").kind, Kind::max_n);
  EXPECT_EQ(spec_of("max9").n, 9u);
  EXPECT_EQ(spec_of("max2").kind, Kind::max2);
  EXPECT_EQ(spec_of("med5").kind, Kind::median);
  EXPECT_EQ(spec_of("sort4").kind, Kind::sort_desc);
  EXPECT_EQ(spec_of("sort-asc4").kind, Kind::sort_asc);
  EXPECT_EQ(spec_of("sort-asc4").n, 4u);
  EXPECT_EQ(spec_of("relu6").plu.gamma, (std::vector<i64>{0, 6}));
  EXPECT_EQ(ProtocolSpec::named("relu6", 8).plu.gamma, (std::vector<i64>{0, 6 * 256}));
  EXPECT_THROW(spec_of("softmax"), std::invalid_argument);
  EXPECT_THROW(spec_of("max1"), std::invalid_argument);

  auto s = plu(four_piece());
  s.plu.skip_zero_slopes = true;
  auto back = ProtocolSpec::from_json(s.to_json());
  EXPECT_EQ(back.kind, Kind::plu);
  EXPECT_EQ(back.plu.gamma, s.plu.gamma);
  EXPECT_EQ(back.plu.alpha, s.plu.alpha);
  EXPECT_EQ(back.plu.beta, s.plu.beta);
  EXPECT_TRUE(back.plu.skip_zero_slopes);
  auto d = dyn(-2, 5);
  auto dback = ProtocolSpec::from_json(d.to_json());
  EXPECT_EQ(dback.alpha0, -2);
  EXPECT_EQ(dback.alpha1, 5);

  PluSpec bad{{3, 1}, {0, 0, 0}, {0, 0, 0}, false};
  EXPECT_THROW(plu(bad).validate(), std::invalid_argument);
  PluSpec short_alpha{{1}, {0}, {0, 0}, false};
  EXPECT_THROW(plu(short_alpha).validate(), std::invalid_argument);
}

TEST(ProtocolSpec, SessionResolvesReplicatedVariants) {
  auto cfg = harness::sim_session(40, 16, "rs");
  EXPECT_EQ(spec_for_session("relu", cfg, false).kind, Kind::relu);
  cfg.sharing = "rss";
  EXPECT_EQ(spec_for_session("relu", cfg, false).kind, Kind::rss_relu);
  EXPECT_EQ(spec_for_session("drelu", cfg, false).kind, Kind::rss_drelu);
  EXPECT_THROW(spec_for_session("max9", cfg, false), std::invalid_argument);
}

TEST(Plaintext, LibraryReferenceAgreesWithTestOracle) {
  const Ring ring(40);
  for (auto spec : {spec_of("relu"), spec_of("equality"), spec_of("sort5"), spec_of("med4"), plu(four_piece()),
                    funnel(3, -2), dyn(-1, 2)}) {
    auto inst = harness::random_instances(spec, 16, 200, 8);
    std::vector<Word> values;
    for (auto& t : inst)
      for (auto v : t) values.push_back(ring.from_signed(v));
    auto lib = reference_outputs(spec, ring, values);
    std::size_t pos = 0;
    for (auto& t : inst) {
      for (auto w : oracle::evaluate(spec, t)) EXPECT_EQ(lib[pos++], ring.from_signed(w));
    }
  }
  EXPECT_EQ(plain::median({1, 2, 3, 4}), 3);  // upper median
}
