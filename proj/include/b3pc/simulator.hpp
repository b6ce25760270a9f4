#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "b3pc/meter.hpp"
#include "b3pc/protocol.hpp"
#include "b3pc/session_config.hpp"
#include "b3pc/wire.hpp"

namespace b3pc {

// Resolves a CLI protocol name against the session: fixed-point presets use
// its frac bits and "drelu"/"relu" select the replicated variants under rss.
ProtocolSpec spec_for_session(const std::string& name, const SessionConfig& cfg, bool fixed);

// Round tags a protocol uses, in order.
std::vector<int> protocol_rounds(const ProtocolSpec& spec);

// Wire width of one ring element; ell not divisible by 8 only occurs in
// simulation and rounds up.
inline unsigned element_bytes(const RingParams& p) { return (p.ell + 7) / 8; }

struct TranscriptFrame {
  int from = 0;
  int to = 0;
  FrameHeader header;
  std::vector<std::uint8_t> bytes;
};

// Encodes the engine's round output after checking it against the schedule.
std::vector<TranscriptFrame> frames_for_round(const ProtocolSpec& spec, const SessionConfig& cfg,
                                              std::uint32_t invocation, std::size_t batch, int party, int round,
                                              std::vector<Message> msgs);
// Senders that owe `party` a frame in `round`, with element counts.
std::vector<Transfer> expected_inbound(const ProtocolSpec& spec, const RingParams& params, std::size_t batch,
                                       int party, int round);
// Decodes a frame and checks it belongs to this (session, protocol, invocation, round, sender).
std::vector<Word> accept_frame(const std::vector<std::uint8_t>& bytes, const ProtocolSpec& spec,
                               const SessionConfig& cfg, std::uint32_t invocation, const Transfer& expected);

struct SimulationOptions {
  std::uint32_t invocation = 1;
  // Called once for P0 and once for P1; both must return identical sources.
  std::function<std::unique_ptr<MaskSource>()> mask_override;
  std::vector<SignTrace>* trace_p0 = nullptr;
  std::vector<SignTrace>* trace_p1 = nullptr;
  P2Trace* p2_trace = nullptr;
};

struct SimulationResult {
  std::array<std::vector<Word>, 3> outputs;
  std::vector<TranscriptFrame> transcript;
  ChannelMeter meter;
};

// All three engines in one thread with in-order delivery through the real framing.
SimulationResult simulate_shares(const ProtocolSpec& spec, const SessionConfig& cfg,
                                 std::array<std::vector<Word>, 3> inputs, std::size_t batch,
                                 const SimulationOptions& opts = {});

// Plaintext reference for a batch of ring-encoded inputs, ring-encoded.
// Inputs are read as signed ring values; ucmp yields the comparison bit.
std::vector<Word> reference_outputs(const ProtocolSpec& spec, const Ring& ring, const std::vector<Word>& values);

// Client sharing with `share_rand`, simulation, reconstruction.
std::vector<Word> simulate_values(const ProtocolSpec& spec, const SessionConfig& cfg, const std::vector<Word>& values,
                                  PrgStream& share_rand, const SimulationOptions& opts = {},
                                  SimulationResult* detail = nullptr);

}  // namespace b3pc
