#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "b3pc/meter.hpp"
#include "b3pc/protocol.hpp"
#include "b3pc/session_config.hpp"

namespace b3pc {

// Splits ring-encoded inputs into per-party input vectors. ASS: P0 and P1
// only; RSS: (first, second) fragment pairs for all three.
std::array<std::vector<Word>, 3> client_share(const ProtocolSpec& spec, const Ring& ring,
                                              std::span<const Word> values, PrgStream& rand);
std::vector<Word> client_reconstruct(const ProtocolSpec& spec, const Ring& ring,
                                     const std::array<std::vector<Word>, 3>& outputs);

struct ClientResult {
  std::vector<Word> outputs;  // ring values, output_arity per instance
  ChannelMeter meter;         // merged from the parties' reports
  double latency_us = 0;
};

struct ClientError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shares `values`, submits one invocation to the parties listed in cfg,
// waits for every party's report and reconstructs. Throws ClientError when
// any party reports a failure or drops the connection.
ClientResult client_submit(const SessionConfig& cfg, const ProtocolSpec& spec, const std::vector<Word>& values,
                           std::uint32_t invocation, PrgStream* share_rand = nullptr);

}  // namespace b3pc
