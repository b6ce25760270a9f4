#include <gtest/gtest.h>

#include "b3pc/meter.hpp"

using namespace b3pc;

TEST(Meter, RecordsPerDirectedChannel) {
  ChannelMeter m;
  m.record(0, 2, 1, 18, 90, 114);
  m.record(1, 2, 1, 18, 90, 114);
  m.record(2, 0, 2, 1, 5, 29);
  EXPECT_EQ(m.bytes(0, 2), 90u);
  EXPECT_EQ(m.bits(0, 2), 720u);
  EXPECT_EQ(m.bytes(2, 0), 5u);
  EXPECT_EQ(m.bytes(0, 1), 0u);
  EXPECT_EQ(m.elements(1, 2), 18u);
  EXPECT_EQ(m.frame_bytes(2, 0), 29u);
  EXPECT_EQ(m.messages(0, 2), 1u);
  EXPECT_EQ(m.total_bytes(), 185u);
  EXPECT_EQ(m.rounds(), 2);
  EXPECT_EQ(m.prologue_rounds(), 0);
}

TEST(Meter, PrologueIsCountedApart) {
  ChannelMeter m;
  m.record(0, 1, 0, 1, 5, 29);
  m.record(0, 1, 1, 1, 5, 29);
  EXPECT_EQ(m.rounds(), 1);
  EXPECT_EQ(m.prologue_rounds(), 1);
}

TEST(Meter, RejectsBadChannels) {
  ChannelMeter m;
  EXPECT_THROW(m.record(1, 1, 1, 1, 1, 1), std::invalid_argument);
  EXPECT_THROW(m.record(3, 0, 1, 1, 1, 1), std::invalid_argument);
  EXPECT_THROW(m.record(0, -1, 1, 1, 1, 1), std::invalid_argument);
}

TEST(Meter, MergeAndJsonRoundTrip) {
  ChannelMeter a, b;
  a.record(0, 2, 1, 3, 15, 39);
  b.record(2, 1, 2, 1, 5, 29);
  b.record(0, 2, 1, 3, 15, 39);
  a.merge(b);
  EXPECT_EQ(a.bytes(0, 2), 30u);
  EXPECT_EQ(a.messages(0, 2), 2u);
  EXPECT_EQ(a.rounds(), 2);
  auto c = ChannelMeter::from_json(a.to_json());
  for (int f = 0; f < 3; ++f) {
    for (int t = 0; t < 3; ++t) {
      EXPECT_EQ(c.bytes(f, t), a.bytes(f, t));
      EXPECT_EQ(c.elements(f, t), a.elements(f, t));
      EXPECT_EQ(c.frame_bytes(f, t), a.frame_bytes(f, t));
      EXPECT_EQ(c.messages(f, t), a.messages(f, t));
    }
  }
  EXPECT_EQ(c.rounds(), 2);
  EXPECT_THROW(ChannelMeter::from_json("{}"), std::exception);
}
