#pragma once

// Engine constructors and helpers shared by the protocol sources.

#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "b3pc/protocol.hpp"
#include "b3pc/sharing.hpp"

namespace b3pc::detail {

class EngineBase : public PartyEngine {
 public:
  EngineBase(const ProtocolSpec& spec, const EngineContext& ctx, std::size_t batch)
      : spec_(spec), ctx_(ctx), ring_(ctx.params.ell), ellx_(ctx.params.ellx), batch_(batch) {}

  void receive(int round, int from, std::vector<Word> elems) override {
    auto [it, fresh] = inbox_.emplace(std::make_pair(round, from), std::move(elems));
    if (!fresh) throw std::runtime_error("duplicate message in one round");
  }

 protected:
  PrgStream stream(SeedLabel label, std::uint16_t purpose) const {
    StreamTag tag{static_cast<std::uint8_t>(spec_.kind), ctx_.session, ctx_.invocation, purpose};
    return ctx_.keys.stream(label, tag);
  }
  std::unique_ptr<MaskSource> mask_source() const {
    if (ctx_.mask_override) return ctx_.mask_override();
    return std::make_unique<StreamMaskSource>(stream(SeedLabel::S01, purpose::sign_masks));
  }
  // Message from `from` in `round`, checked against the expected length.
  const std::vector<Word>& got(int round, int from, std::size_t expected) const {
    auto it = inbox_.find({round, from});
    if (it == inbox_.end()) throw std::runtime_error("missing message from party " + std::to_string(from));
    if (it->second.size() != expected) throw std::runtime_error("message from party " + std::to_string(from) +
                                                                 " has unexpected length");
    return it->second;
  }
  int party() const { return ctx_.party; }
  std::size_t array_len() const { return ellx_ + 2; }

  ProtocolSpec spec_;
  EngineContext ctx_;
  Ring ring_;
  unsigned ellx_;
  std::size_t batch_;
  std::map<std::pair<int, int>, std::vector<Word>> inbox_;
};

// P0/P1: append this party's share of the masked, shuffled sign-test array of
// the value whose share is `x`, negated first when t = 1.
void build_sign_array(const Ring& ring, unsigned ellx, int party, Word x, unsigned t, MaskSource& masks,
                      std::vector<Word>& out, std::vector<SignTrace>* trace);

// P2: 1 iff the reconstructed array holds a zero. Records into trace if set.
unsigned sign_verdict(const Ring& ring, std::span<const Word> w0, std::span<const Word> w1, P2Trace* trace);

// Public coefficient (1 - 2t) in the ring.
inline Word one_minus_2t(const Ring& ring, unsigned t) { return t ? ring.neg(1) : 1; }

std::unique_ptr<PartyEngine> make_sign_engine(const ProtocolSpec&, const EngineContext&, std::vector<Word>, std::size_t);
std::unique_ptr<PartyEngine> make_relu_engine(const ProtocolSpec&, const EngineContext&, std::vector<Word>, std::size_t);
std::unique_ptr<PartyEngine> make_plu_engine(const ProtocolSpec&, const EngineContext&, std::vector<Word>, std::size_t);
std::unique_ptr<PartyEngine> make_select_engine(const ProtocolSpec&, const EngineContext&, std::vector<Word>, std::size_t);
std::unique_ptr<PartyEngine> make_rss_engine(const ProtocolSpec&, const EngineContext&, std::vector<Word>, std::size_t);

}  // namespace b3pc::detail
