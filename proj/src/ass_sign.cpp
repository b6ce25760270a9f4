// DReLU, MSB, uCMP and Equality over additive shares.

#include "engines.hpp"

namespace b3pc::detail {

namespace {

class SignEngine final : public EngineBase {
 public:
  SignEngine(const ProtocolSpec& spec, const EngineContext& ctx, std::vector<Word> inputs, std::size_t batch)
      : EngineBase(spec, ctx, batch), inputs_(std::move(inputs)) {}

  std::vector<Message> send(int round) override {
    if (party() != 2) return round == 1 ? request() : std::vector<Message>{};
    if (round == 2 && spec_.kind != Kind::ucmp) return respond();
    return {};
  }

  std::vector<Word> output() override {
    if (party() == 2) return spec_.kind == Kind::ucmp ? verdicts_ : std::vector<Word>{};
    if (spec_.kind == Kind::ucmp) return {};
    const auto& v = got(2, 2, batch_);
    std::vector<Word> out(batch_);
    for (std::size_t i = 0; i < batch_; ++i) {
      Word bit = xor_public(ring_, party(), v[i], flips_[i]);
      if (spec_.kind == Kind::msb || spec_.kind == Kind::equality) bit = ring_.sub(party() == 0 ? 1 : 0, bit);
      out[i] = bit;
    }
    return out;
  }

  // uCMP keeps its verdict at P2, decided as soon as both arrays are in.
  void receive(int round, int from, std::vector<Word> elems) override {
    EngineBase::receive(round, from, std::move(elems));
    if (spec_.kind == Kind::ucmp && party() == 2 && round == 1 && inbox_.size() == 2) decide();
  }

 private:
  std::size_t arrays_per_instance() const { return spec_.kind == Kind::equality ? 2 : 1; }

  std::vector<Message> request() {
    auto masks = mask_source();
    std::vector<Word> w;
    w.reserve(batch_ * arrays_per_instance() * array_len());
    flips_.resize(batch_);
    for (std::size_t i = 0; i < batch_; ++i) {
      switch (spec_.kind) {
        case Kind::drelu:
        case Kind::msb: {
          unsigned t = masks->flip();
          build_sign_array(ring_, ellx_, party(), inputs_[i], t, *masks, w, ctx_.sign_trace);
          flips_[i] = t;
          break;
        }
        case Kind::ucmp: {
          Word diff = ring_.sub(inputs_[2 * i], inputs_[2 * i + 1]);
          build_sign_array(ring_, ellx_, party(), diff, 0, *masks, w, ctx_.sign_trace);
          break;
        }
        case Kind::equality: {
          Word xy = ring_.sub(inputs_[2 * i], inputs_[2 * i + 1]);
          unsigned t0 = masks->flip();
          unsigned t1 = masks->flip();
          build_sign_array(ring_, ellx_, party(), xy, t0, *masks, w, ctx_.sign_trace);
          build_sign_array(ring_, ellx_, party(), ring_.neg(xy), t1, *masks, w, ctx_.sign_trace);
          flips_[i] = t0 ^ t1;
          break;
        }
        default: throw std::logic_error("sign engine given a foreign protocol");
      }
    }
    std::vector<Message> out;
    out.push_back({2, std::move(w)});
    return out;
  }

  void decide() {
    const std::size_t len = array_len() * arrays_per_instance();
    const auto& w0 = got(1, 0, batch_ * len);
    const auto& w1 = got(1, 1, batch_ * len);
    verdicts_.resize(batch_);
    for (std::size_t i = 0; i < batch_; ++i) {
      std::span<const Word> a(w0.data() + i * len, len);
      std::span<const Word> b(w1.data() + i * len, len);
      if (spec_.kind == Kind::equality) {
        unsigned d0 = sign_verdict(ring_, a.first(array_len()), b.first(array_len()), ctx_.p2_trace);
        unsigned d1 = sign_verdict(ring_, a.last(array_len()), b.last(array_len()), ctx_.p2_trace);
        verdicts_[i] = d0 ^ d1;
      } else {
        verdicts_[i] = sign_verdict(ring_, a, b, ctx_.p2_trace);
      }
    }
  }

  std::vector<Message> respond() {
    decide();
    PrgStream own = stream(SeedLabel::S2, purpose::verdict);
    std::vector<Word> to0(batch_), to1(batch_);
    for (std::size_t i = 0; i < batch_; ++i) {
      to0[i] = own.draw_ring(ring_);
      to1[i] = ring_.sub(verdicts_[i], to0[i]);
    }
    std::vector<Message> out;
    out.push_back({0, std::move(to0)});
    out.push_back({1, std::move(to1)});
    return out;
  }

  std::vector<Word> inputs_;
  std::vector<unsigned> flips_;
  std::vector<Word> verdicts_;
};

}  // namespace

std::unique_ptr<PartyEngine> make_sign_engine(const ProtocolSpec& spec, const EngineContext& ctx,
                                              std::vector<Word> inputs, std::size_t batch) {
  return std::make_unique<SignEngine>(spec, ctx, std::move(inputs), batch);
}

}  // namespace b3pc::detail
