#include "b3pc/simulator.hpp"

#include <algorithm>
#include <stdexcept>

#include "b3pc/client.hpp"
#include "b3pc/plaintext.hpp"

namespace b3pc {

ProtocolSpec spec_for_session(const std::string& name, const SessionConfig& cfg, bool fixed) {
  ProtocolSpec spec = ProtocolSpec::named(name, fixed ? cfg.params.frac_bits : 0);
  if (cfg.sharing == "rss") {
    if (spec.kind == Kind::drelu) {
      spec.kind = Kind::rss_drelu;
    } else if (spec.kind == Kind::relu) {
      spec.kind = Kind::rss_relu;
    } else if (!is_rss(spec.kind)) {
      throw std::invalid_argument(std::string("protocol ") + kind_name(spec.kind) +
                                  " has no replicated-sharing variant");
    }
  } else if (is_rss(spec.kind)) {
    throw std::invalid_argument("replicated protocols need a session with sharing \"rss\"");
  }
  spec.validate();
  return spec;
}

std::vector<int> protocol_rounds(const ProtocolSpec& spec) {
  if (spec.kind == Kind::ucmp) return {1};
  if (is_rss(spec.kind)) return {0, 1, 2};
  return {1, 2};
}

std::vector<TranscriptFrame> frames_for_round(const ProtocolSpec& spec, const SessionConfig& cfg,
                                              std::uint32_t invocation, std::size_t batch, int party, int round,
                                              std::vector<Message> msgs) {
  auto sched = schedule(spec, cfg.params, batch);
  std::vector<Transfer> due;
  for (const auto& t : sched) {
    if (t.round == round && t.from == party) due.push_back(t);
  }
  if (msgs.size() != due.size()) {
    throw std::logic_error(std::string(kind_name(spec.kind)) + ": party " + std::to_string(party) +
                           " sends off-schedule in round " + std::to_string(round));
  }
  std::vector<TranscriptFrame> frames;
  for (auto& m : msgs) {
    auto it = std::find_if(due.begin(), due.end(), [&](const Transfer& t) { return t.to == m.to; });
    if (it == due.end() || it->elements != m.elems.size()) {
      throw std::logic_error(std::string(kind_name(spec.kind)) + ": message " + std::to_string(party) + "->" +
                             std::to_string(m.to) + " in round " + std::to_string(round) + " does not match schedule");
    }
    FrameHeader h;
    h.session = cfg.session_id;
    h.sender = static_cast<std::uint8_t>(party);
    h.protocol = static_cast<std::uint8_t>(spec.kind);
    h.instance = invocation;
    h.round = static_cast<std::uint8_t>(round);
    TranscriptFrame f{party, m.to, h, encode_frame(h, m.elems, element_bytes(cfg.params))};
    f.header.count = static_cast<std::uint32_t>(m.elems.size());
    frames.push_back(std::move(f));
  }
  return frames;
}

std::vector<Transfer> expected_inbound(const ProtocolSpec& spec, const RingParams& params, std::size_t batch,
                                       int party, int round) {
  std::vector<Transfer> in;
  for (const auto& t : schedule(spec, params, batch)) {
    if (t.round == round && t.to == party) in.push_back(t);
  }
  return in;
}

std::vector<Word> accept_frame(const std::vector<std::uint8_t>& bytes, const ProtocolSpec& spec,
                               const SessionConfig& cfg, std::uint32_t invocation, const Transfer& expected) {
  if (bytes.size() < kHeaderSize) throw WireError("short frame");
  FrameHeader h = decode_header(bytes.data());
  if (h.session != cfg.session_id) throw WireError("frame from another session");
  if (h.protocol != static_cast<std::uint8_t>(spec.kind) || h.instance != invocation) {
    throw WireError("frame from another invocation");
  }
  if (h.round != expected.round || h.sender != expected.from) throw WireError("frame out of schedule");
  if (h.count != expected.elements) throw WireError("frame has unexpected element count");
  const unsigned eb = element_bytes(cfg.params);
  if (bytes.size() != kHeaderSize + payload_size(h, eb)) throw WireError("frame length mismatch");
  auto elems = unpack_elements(bytes.data() + kHeaderSize, h.count, eb);
  // Only rings narrower than the wire width can receive stray high bits.
  if (cfg.params.ell < 8 * eb) {
    const Ring ring(cfg.params.ell);
    for (Word v : elems) {
      if (v != ring.reduce(v)) throw WireError("element outside the ring");
    }
  }
  return elems;
}

SimulationResult simulate_shares(const ProtocolSpec& spec, const SessionConfig& cfg,
                                 std::array<std::vector<Word>, 3> inputs, std::size_t batch,
                                 const SimulationOptions& opts) {
  std::array<std::unique_ptr<PartyEngine>, 3> engines;
  for (int p = 0; p < 3; ++p) {
    EngineContext ctx;
    ctx.params = cfg.params;
    ctx.party = p;
    ctx.keys = cfg.keys_for(p);
    ctx.session = cfg.session_id;
    ctx.invocation = opts.invocation;
    if (p != 2) ctx.mask_override = opts.mask_override;
    ctx.sign_trace = p == 0 ? opts.trace_p0 : p == 1 ? opts.trace_p1 : nullptr;
    ctx.p2_trace = p == 2 ? opts.p2_trace : nullptr;
    engines[p] = make_engine(spec, ctx, std::move(inputs[p]), batch);
  }

  SimulationResult res;
  for (int round : protocol_rounds(spec)) {
    std::vector<TranscriptFrame> pending;
    for (int p = 0; p < 3; ++p) {
      auto frames = frames_for_round(spec, cfg, opts.invocation, batch, p, round, engines[p]->send(round));
      for (auto& f : frames) pending.push_back(std::move(f));
    }
    for (const auto& f : pending) {
      Transfer t{round, f.from, f.to, f.header.count};
      auto elems = accept_frame(f.bytes, spec, cfg, opts.invocation, t);
      std::uint64_t payload = f.bytes.size() - kHeaderSize;
      res.meter.record(f.from, f.to, round, elems.size(), payload, f.bytes.size());
      engines[f.to]->receive(round, f.from, std::move(elems));
    }
    for (auto& f : pending) res.transcript.push_back(std::move(f));
  }
  for (int p = 0; p < 3; ++p) res.outputs[p] = engines[p]->output();
  return res;
}

std::vector<Word> reference_outputs(const ProtocolSpec& spec, const Ring& ring, const std::vector<Word>& values) {
  using plain::Value;
  const std::size_t arity = spec.input_arity();
  if (values.size() % arity != 0) throw std::invalid_argument("input count is not a multiple of the arity");
  std::vector<Word> out;
  auto emit = [&](Value v) { out.push_back(ring.from_signed(v)); };
  for (std::size_t i = 0; i < values.size(); i += arity) {
    std::vector<Value> x(arity);
    for (std::size_t k = 0; k < arity; ++k) x[k] = ring.to_signed(values[i + k]);
    switch (spec.kind) {
      case Kind::drelu:
      case Kind::rss_drelu: emit(plain::drelu(x[0])); break;
      case Kind::msb: emit(plain::msb(x[0])); break;
      case Kind::ucmp: emit(plain::cmp(x[0], x[1])); break;
      case Kind::equality: emit(plain::equality(x[0], x[1])); break;
      case Kind::relu:
      case Kind::rss_relu: emit(plain::relu(x[0])); break;
      case Kind::abs: emit(plain::abs(x[0])); break;
      case Kind::dynamic_relu: emit(plain::dynamic_relu(x[0], spec.alpha0, spec.alpha1)); break;
      case Kind::max2: emit(plain::max2(x[0], x[1])); break;
      case Kind::min2: emit(plain::min2(x[0], x[1])); break;
      case Kind::funnel: emit(plain::funnel(x[0], spec.funnel_scale, spec.funnel_offset)); break;
      case Kind::plu: emit(plain::plu(spec.plu, x[0])); break;
      case Kind::max_n: emit(plain::max_n(x)); break;
      case Kind::min_n: emit(plain::min_n(x)); break;
      case Kind::median: emit(plain::median(x)); break;
      case Kind::sort_desc:
        for (Value v : plain::sort_desc(x)) emit(v);
        break;
      case Kind::sort_asc:
        for (Value v : plain::sort_asc(x)) emit(v);
        break;
    }
  }
  return out;
}

std::vector<Word> simulate_values(const ProtocolSpec& spec, const SessionConfig& cfg, const std::vector<Word>& values,
                                  PrgStream& share_rand, const SimulationOptions& opts, SimulationResult* detail) {
  const Ring ring(cfg.params.ell);
  const std::size_t arity = spec.input_arity();
  if (values.size() % arity != 0) throw std::invalid_argument("input count is not a multiple of the arity");
  const std::size_t batch = values.size() / arity;
  auto shares = client_share(spec, ring, values, share_rand);
  SimulationResult res = simulate_shares(spec, cfg, std::move(shares), batch, opts);
  std::vector<Word> out = spec.kind == Kind::ucmp ? res.outputs[2] : client_reconstruct(spec, ring, res.outputs);
  if (detail) *detail = std::move(res);
  return out;
}

}  // namespace b3pc
