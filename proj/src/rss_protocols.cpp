// DReLU and ReLU over replicated shares. The sign test runs on the additive
// projection (P0: x0 + x1, P1: x2); P2 answers with its verdict masked by a
// bit s only it knows in the clear, and [s xor t] unmasks it inside the sharing.

#include "b3pc/rss.hpp"
#include "engines.hpp"

namespace b3pc::detail {

namespace {

class RssEngine final : public EngineBase {
 public:
  RssEngine(const ProtocolSpec& spec, const EngineContext& ctx, std::vector<Word> inputs, std::size_t batch)
      : EngineBase(spec, ctx, batch), insts_(batch) {
    for (std::size_t i = 0; i < batch; ++i) insts_[i].x = {party(), inputs[2 * i], inputs[2 * i + 1]};
  }

  std::vector<Message> send(int round) override {
    switch (round) {
      case 0: return prologue();
      case 1: return round_one();
      case 2: return round_two();
      default: return {};
    }
  }

  std::vector<Word> output() override {
    const bool relu = spec_.kind == Kind::rss_relu;
    // Round II: D'' from P2 (P2 uses its own), and for ReLU c_{i+1} of the product.
    const Word* dd = nullptr;
    const Word* c_next = nullptr;
    if (party() == 0) {
      dd = got(2, 2, batch_).data();
      if (relu) c_next = got(2, 1, batch_).data();
    } else if (party() == 1) {
      dd = got(2, 2, batch_ * (relu ? 2 : 1)).data();
      if (relu) c_next = dd + batch_;
    } else if (relu) {
      c_next = got(2, 0, batch_).data();
    }
    std::vector<Word> out;
    out.reserve(2 * batch_);
    for (std::size_t i = 0; i < batch_; ++i) {
      Inst& s = insts_[i];
      Word d = party() == 2 ? s.masked_verdict : dd[i];
      Word sgn = one_minus_2t(ring_, static_cast<unsigned>(d));
      RssShare r;
      if (relu) {
        s.ux.second = c_next[i];
        r = rss_add(ring_, rss_scale(ring_, s.x, d), rss_scale(ring_, s.ux, sgn));
      } else {
        r = rss_add_public(ring_, rss_scale(ring_, s.u, sgn), d);
      }
      out.push_back(r.first);
      out.push_back(r.second);
    }
    return out;
  }

 private:
  struct Inst {
    RssShare x, s, t, st, u, ux;
    unsigned flip = 0;          // P0, P1
    unsigned s_bit = 0;         // P2
    Word masked_verdict = 0;    // P2
  };

  // Streams for the zero sharing: party i holds a_i and a_{i+1}.
  std::pair<PrgStream, PrgStream> zero_streams(std::uint16_t p) const {
    switch (party()) {
      case 0: return {stream(SeedLabel::S02, p), stream(SeedLabel::S01, p)};
      case 1: return {stream(SeedLabel::S01, p), stream(SeedLabel::S12, p)};
      default: return {stream(SeedLabel::S12, p), stream(SeedLabel::S02, p)};
    }
  }

  std::vector<Message> prologue() {
    if (party() == 0) return {};
    PrgStream s012 = stream(SeedLabel::S012, purpose::rss_s);
    PrgStream s12 = stream(SeedLabel::S12, purpose::rss_s);
    if (party() == 1) {
      for (auto& s : insts_) s.s = rss_share_s_p1(ring_, s012, s12);
      return {};
    }
    PrgStream s2 = stream(SeedLabel::S2, purpose::rss_s);
    std::vector<Word> to0;
    to0.reserve(batch_);
    for (auto& s : insts_) {
      RssShareS r = rss_share_s_p2(ring_, s012, s12, s2, s.s_bit);
      s.s = r.share;
      to0.push_back(r.to_p0);
    }
    std::vector<Message> out;
    out.push_back({0, std::move(to0)});
    return out;
  }

  std::vector<Message> round_one() {
    if (party() == 0) {
      const auto& s0 = got(0, 2, batch_);
      PrgStream s012 = stream(SeedLabel::S012, purpose::rss_s);
      for (std::size_t i = 0; i < batch_; ++i) insts_[i].s = rss_share_s_p0(ring_, s012, s0[i]);
    }
    std::unique_ptr<MaskSource> masks;
    if (party() != 2) masks = mask_source();
    PrgStream tz = stream(SeedLabel::S012, purpose::rss_t);
    auto [za, zb] = zero_streams(purpose::rss_zero_st);
    std::vector<Word> w, c;
    c.reserve(batch_);
    for (auto& s : insts_) {
      if (party() != 2) s.flip = masks->flip();
      s.t = rss_share_t(ring_, party(), s.flip, tz);
      if (party() != 2) {
        Word proj = party() == 0 ? ring_.add(s.x.first, s.x.second) : s.x.second;
        build_sign_array(ring_, ellx_, party(), proj, s.flip, *masks, w, ctx_.sign_trace);
      }
      c.push_back(rss_mul_local(ring_, s.s, s.t, rss_zero33(ring_, za, zb)));
      s.st.party = party();
      s.st.first = c.back();
    }
    std::vector<Message> out;
    if (party() == 0) {
      w.insert(w.end(), c.begin(), c.end());
      out.push_back({2, std::move(w)});
    } else if (party() == 1) {
      out.push_back({2, std::move(w)});
      out.push_back({0, std::move(c)});
    } else {
      out.push_back({1, std::move(c)});
    }
    return out;
  }

  std::vector<Message> round_two() {
    const std::size_t len = array_len();
    const int next = rss_next(party());
    std::vector<Word> st_next;
    std::vector<Word> w0, w1;
    if (party() == 2) {
      const auto& m0 = got(1, 0, batch_ * (len + 1));
      w0.assign(m0.begin(), m0.begin() + static_cast<std::ptrdiff_t>(batch_ * len));
      st_next.assign(m0.begin() + static_cast<std::ptrdiff_t>(batch_ * len), m0.end());
      w1 = got(1, 1, batch_ * len);
    } else {
      st_next = got(1, next, batch_);
    }

    auto [za, zb] = zero_streams(purpose::rss_zero_ux);
    std::vector<Word> dd, c;
    for (std::size_t i = 0; i < batch_; ++i) {
      Inst& s = insts_[i];
      s.st.second = st_next[i];
      // [s xor t] = [s] + [t] - 2[st]
      s.u = rss_sub(ring_, rss_add(ring_, s.s, s.t), rss_scale(ring_, s.st, 2));
      if (spec_.kind == Kind::rss_relu) {
        c.push_back(rss_mul_local(ring_, s.u, s.x, rss_zero33(ring_, za, zb)));
        s.ux = {party(), c.back(), 0};
      }
      if (party() == 2) {
        unsigned v = sign_verdict(ring_, std::span<const Word>(w0.data() + i * len, len),
                                  std::span<const Word>(w1.data() + i * len, len), ctx_.p2_trace);
        s.masked_verdict = v ^ s.s_bit;
        dd.push_back(s.masked_verdict);
      }
    }

    std::vector<Message> out;
    if (party() == 2) {
      out.push_back({0, dd});
      if (spec_.kind == Kind::rss_relu) {
        // P1 gets D'' and c2 in one frame.
        dd.insert(dd.end(), c.begin(), c.end());
        c.clear();
      }
      out.push_back({1, std::move(dd)});
    }
    if (spec_.kind == Kind::rss_relu && party() != 2) out.push_back({rss_prev(party()), std::move(c)});
    return out;
  }

  std::vector<Inst> insts_;
};

}  // namespace

std::unique_ptr<PartyEngine> make_rss_engine(const ProtocolSpec& spec, const EngineContext& ctx,
                                             std::vector<Word> inputs, std::size_t batch) {
  return std::make_unique<RssEngine>(spec, ctx, std::move(inputs), batch);
}

}  // namespace b3pc::detail
