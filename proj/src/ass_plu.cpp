// Piecewise linear units: m+1 sign tests on x - gamma_j and one Beaver slot
// per piece, all slots sharing the same a.

#include "engines.hpp"

namespace b3pc::detail {

namespace {

class PluEngine final : public EngineBase {
 public:
  PluEngine(const ProtocolSpec& spec, const EngineContext& ctx, std::vector<Word> inputs, std::size_t batch)
      : EngineBase(spec, ctx, batch), inputs_(std::move(inputs)), plu_(spec.plu) {
    for (std::size_t j = 0; j < plu_.pieces(); ++j) {
      if (plu_.skip_zero_slopes && plu_.alpha[j] == 0) {
        slot_of_piece_.push_back(-1);
      } else {
        slot_of_piece_.push_back(static_cast<int>(piece_of_slot_.size()));
        piece_of_slot_.push_back(j);
      }
    }
    layout_ = TripleLayout::shared_a(piece_of_slot_.size());
  }

  std::vector<Message> send(int round) override {
    if (party() != 2) return round == 1 ? request() : std::vector<Message>{};
    return round == 2 ? respond() : std::vector<Message>{};
  }

  std::vector<Word> output() override {
    if (party() == 2) return {};
    const std::size_t slots = layout_.b_count();
    const std::size_t pieces = plu_.pieces();
    const std::size_t corr = party() == 0 ? layout_.corrections_to_p0() : layout_.corrections_to_p1();
    const std::size_t per = slots + pieces + corr;
    const auto& e_other = got(1, 1 - party(), batch_);
    const auto& from2 = got(2, 2, batch_ * per);
    std::vector<Word> out(batch_);
    for (std::size_t i = 0; i < batch_; ++i) {
      Inst& s = insts_[i];
      const Word* d = from2.data() + i * per;
      const Word* v = d + slots;
      apply_corrections(s.tri, party(), layout_, std::span<const Word>(v + pieces, corr));
      Word e = ring_.add(s.e, e_other[i]);
      Word acc = 0;
      for (std::size_t j = 0; j < pieces; ++j) {
        // The piece indicator is tau xor V_j, with tau public to P0 and P1.
        unsigned tau = j == 0 ? 1u ^ s.t[0] : j == pieces - 1 ? s.t[j - 1] : s.t[j - 1] ^ s.t[j];
        Word alpha = ring_.from_signed(plu_.alpha[j]);
        Word beta = ring_.from_signed(plu_.beta[j]);
        Word vx = 0;
        int slot = slot_of_piece_[j];
        if (slot >= 0) {
          vx = beaver_finish(ring_, party(), e, d[slot], s.tri.a[0], s.tri.b[slot], s.tri.c[slot]);
        }
        Word masked = ring_.add(ring_.mul(alpha, vx), ring_.mul(beta, v[j]));
        Word plain = add_public(ring_, party(), ring_.mul(alpha, s.x), beta);
        acc = ring_.add(acc, ring_.mul(one_minus_2t(ring_, tau), masked));
        if (tau) acc = ring_.add(acc, plain);
      }
      out[i] = acc;
    }
    return out;
  }

 private:
  struct Inst {
    Word x = 0, e = 0;
    std::vector<unsigned> t;
    TripleShares tri;
  };

  std::vector<Message> request() {
    auto masks = mask_source();
    PrgStream tri = stream(party() == 0 ? SeedLabel::S02 : SeedLabel::S12, purpose::triples);
    const std::size_t tests = plu_.gamma.size();
    std::vector<Word> w, e;
    w.reserve(batch_ * tests * array_len());
    insts_.resize(batch_);
    for (std::size_t i = 0; i < batch_; ++i) {
      Inst& s = insts_[i];
      s.x = inputs_[i];
      s.t.resize(tests);
      for (std::size_t j = 0; j < tests; ++j) {
        Word shifted = add_public(ring_, party(), s.x, ring_.from_signed(-plu_.gamma[j]));
        s.t[j] = masks->flip();
        build_sign_array(ring_, ellx_, party(), shifted, s.t[j], *masks, w, ctx_.sign_trace);
      }
      s.tri = party() == 0 ? derive_triple_p0(ring_, layout_, tri) : derive_triple_p1(ring_, layout_, tri);
      s.e = ring_.sub(s.x, s.tri.a[0]);
      e.push_back(s.e);
    }
    std::vector<Message> out;
    out.push_back({2, std::move(w)});
    out.push_back({1 - party(), std::move(e)});
    return out;
  }

  std::vector<Message> respond() {
    const std::size_t tests = plu_.gamma.size();
    const std::size_t pieces = plu_.pieces();
    const std::size_t len = array_len();
    const auto& w0 = got(1, 0, batch_ * tests * len);
    const auto& w1 = got(1, 1, batch_ * tests * len);
    PrgStream t02 = stream(SeedLabel::S02, purpose::triples);
    PrgStream t12 = stream(SeedLabel::S12, purpose::triples);
    PrgStream own = stream(SeedLabel::S2, purpose::verdict);
    std::vector<Word> to0, to1;
    std::vector<unsigned> dv(tests);
    std::vector<Word> v(pieces);
    for (std::size_t i = 0; i < batch_; ++i) {
      for (std::size_t j = 0; j < tests; ++j) {
        std::size_t off = (i * tests + j) * len;
        dv[j] = sign_verdict(ring_, std::span<const Word>(w0.data() + off, len),
                             std::span<const Word>(w1.data() + off, len), ctx_.p2_trace);
      }
      v[0] = dv[0];
      for (std::size_t j = 1; j < tests; ++j) v[j] = dv[j - 1] ^ dv[j];
      v[pieces - 1] = dv[tests - 1];

      TripleDealing deal = deal_triple_p2(ring_, layout_, t02, t12);
      for (std::size_t slot = 0; slot < layout_.b_count(); ++slot) {
        Word b = ring_.add(deal.p0.b[slot], deal.p1.b[slot]);
        Word d = ring_.sub(v[piece_of_slot_[slot]], b);
        to0.push_back(d);
        to1.push_back(d);
      }
      for (std::size_t j = 0; j < pieces; ++j) {
        Word r = own.draw_ring(ring_);
        to0.push_back(r);
        to1.push_back(ring_.sub(v[j], r));
      }
      to0.insert(to0.end(), deal.to_p0.begin(), deal.to_p0.end());
      to1.insert(to1.end(), deal.to_p1.begin(), deal.to_p1.end());
    }
    std::vector<Message> out;
    out.push_back({0, std::move(to0)});
    out.push_back({1, std::move(to1)});
    return out;
  }

  std::vector<Word> inputs_;
  PluSpec plu_;
  std::vector<int> slot_of_piece_;
  std::vector<std::size_t> piece_of_slot_;
  TripleLayout layout_;
  std::vector<Inst> insts_;
};

}  // namespace

std::unique_ptr<PartyEngine> make_plu_engine(const ProtocolSpec& spec, const EngineContext& ctx,
                                             std::vector<Word> inputs, std::size_t batch) {
  return std::make_unique<PluEngine>(spec, ctx, std::move(inputs), batch);
}

}  // namespace b3pc::detail
