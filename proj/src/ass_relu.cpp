// ReLU and the variants that need one sign test and one multiplication:
// ABS, dynamic ReLU, MAX2, MIN2, funnel ReLU.

#include "engines.hpp"

namespace b3pc::detail {

namespace {

class ReluEngine final : public EngineBase {
 public:
  ReluEngine(const ProtocolSpec& spec, const EngineContext& ctx, std::vector<Word> inputs, std::size_t batch)
      : EngineBase(spec, ctx, batch), inputs_(std::move(inputs)), layout_(TripleLayout::independent(1)) {}

  std::vector<Message> send(int round) override {
    if (party() != 2) return round == 1 ? request() : std::vector<Message>{};
    return round == 2 ? respond() : std::vector<Message>{};
  }

  std::vector<Word> output() override {
    if (party() == 2) return {};
    const int other = 1 - party();
    const auto& e_other = got(1, other, batch_);
    const std::size_t per = party() == 0 ? 1 : 2;
    const auto& from2 = got(2, 2, batch_ * per);
    std::vector<Word> out(batch_);
    for (std::size_t i = 0; i < batch_; ++i) {
      Inst& s = insts_[i];
      Word d = from2[i * per];
      if (party() == 1) s.c = from2[i * per + 1];
      Word e = ring_.add(s.e, e_other[i]);
      // [t' * z] where t' is P2's blinded verdict.
      Word m = beaver_finish(ring_, party(), e, d, s.a, s.b, s.c);
      Word sgn = one_minus_2t(ring_, s.t);
      Word t = s.t;
      Word r = 0;
      switch (spec_.kind) {
        case Kind::relu: r = ring_.add(ring_.mul(sgn, m), ring_.mul(t, s.x)); break;
        case Kind::abs:
          r = ring_.add(ring_.mul(ring_.mul(2, sgn), m), ring_.mul(ring_.sub(ring_.mul(2, t), 1), s.x));
          break;
        case Kind::dynamic_relu: {
          Word da = ring_.from_signed(spec_.alpha1 - spec_.alpha0);
          Word a0 = ring_.from_signed(spec_.alpha0);
          r = ring_.add(ring_.mul(ring_.mul(sgn, da), m), ring_.mul(ring_.add(ring_.mul(da, t), a0), s.x));
          break;
        }
        case Kind::max2:
        case Kind::funnel:
          r = ring_.add(ring_.add(ring_.mul(sgn, m), ring_.mul(t, s.z)), s.y);
          break;
        case Kind::min2:
          r = ring_.sub(ring_.sub(s.x, ring_.mul(sgn, m)), ring_.mul(t, s.z));
          break;
        default: throw std::logic_error("relu engine given a foreign protocol");
      }
      out[i] = r;
    }
    return out;
  }

 private:
  struct Inst {
    unsigned t = 0;
    Word x = 0, y = 0, z = 0;  // z is the multiplicand, y the additive base
    Word a = 0, b = 0, c = 0, e = 0;
  };

  std::vector<Message> request() {
    auto masks = mask_source();
    PrgStream tri = stream(party() == 0 ? SeedLabel::S02 : SeedLabel::S12, purpose::triples);
    std::vector<Word> w, e;
    w.reserve(batch_ * array_len());
    e.reserve(batch_);
    insts_.resize(batch_);
    for (std::size_t i = 0; i < batch_; ++i) {
      Inst& s = insts_[i];
      switch (spec_.kind) {
        case Kind::max2:
        case Kind::min2:
          s.x = inputs_[2 * i];
          s.y = inputs_[2 * i + 1];
          s.z = ring_.sub(s.x, s.y);
          break;
        case Kind::funnel: {
          s.x = inputs_[i];
          Word tx = ring_.mul(ring_.from_signed(spec_.funnel_scale), s.x);
          s.y = add_public(ring_, party(), tx, ring_.from_signed(spec_.funnel_offset));
          s.z = ring_.sub(s.x, s.y);
          break;
        }
        default:
          s.x = inputs_[i];
          s.z = s.x;
      }
      s.t = masks->flip();
      build_sign_array(ring_, ellx_, party(), s.z, s.t, *masks, w, ctx_.sign_trace);
      TripleShares ts = party() == 0 ? derive_triple_p0(ring_, layout_, tri) : derive_triple_p1(ring_, layout_, tri);
      s.a = ts.a[0];
      s.b = ts.b[0];
      s.c = ts.c[0];
      s.e = ring_.sub(s.z, s.a);
      e.push_back(s.e);
    }
    std::vector<Message> out;
    out.push_back({2, std::move(w)});
    out.push_back({1 - party(), std::move(e)});
    return out;
  }

  std::vector<Message> respond() {
    const std::size_t len = array_len();
    const auto& w0 = got(1, 0, batch_ * len);
    const auto& w1 = got(1, 1, batch_ * len);
    PrgStream t02 = stream(SeedLabel::S02, purpose::triples);
    PrgStream t12 = stream(SeedLabel::S12, purpose::triples);
    std::vector<Word> to0, to1;
    to0.reserve(batch_);
    to1.reserve(2 * batch_);
    for (std::size_t i = 0; i < batch_; ++i) {
      unsigned v = sign_verdict(ring_, std::span<const Word>(w0.data() + i * len, len),
                                std::span<const Word>(w1.data() + i * len, len), ctx_.p2_trace);
      TripleDealing deal = deal_triple_p2(ring_, layout_, t02, t12);
      Word b = ring_.add(deal.p0.b[0], deal.p1.b[0]);
      Word d = ring_.sub(v, b);
      to0.push_back(d);
      to1.push_back(d);
      to1.push_back(deal.to_p1[0]);
    }
    std::vector<Message> out;
    out.push_back({0, std::move(to0)});
    out.push_back({1, std::move(to1)});
    return out;
  }

  std::vector<Word> inputs_;
  TripleLayout layout_;
  std::vector<Inst> insts_;
};

}  // namespace

std::unique_ptr<PartyEngine> make_relu_engine(const ProtocolSpec& spec, const EngineContext& ctx,
                                              std::vector<Word> inputs, std::size_t batch) {
  return std::make_unique<ReluEngine>(spec, ctx, std::move(inputs), batch);
}

}  // namespace b3pc::detail
