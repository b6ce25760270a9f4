// MAX, MIN, median and sort of n shared values: one round of pairwise
// unblinded comparisons, then P2 picks an indicator (or a permutation matrix)
// and the parties apply it with Beaver slots.

#include <algorithm>

#include "engines.hpp"

namespace b3pc::detail {

namespace {

// P2's view of the comparisons: ge(i, j) = [phi_i >= phi_j] for i < j.
class CmpMatrix {
 public:
  explicit CmpMatrix(std::size_t n) : n_(n), bits_(n * n, 0) {}
  void set(std::size_t i, std::size_t j, unsigned v) { bits_[i * n_ + j] = static_cast<std::uint8_t>(v); }
  unsigned ge(std::size_t i, std::size_t j) const { return bits_[i * n_ + j]; }

  // First occurrence of the maximum among `alive`; with truncation noise the
  // rule can find nobody, in which case the index with the most wins is used.
  std::size_t argmax(const std::vector<bool>& alive) const { return pick(alive, true); }
  // Last occurrence of the minimum.
  std::size_t argmin(const std::vector<bool>& alive) const { return pick(alive, false); }

 private:
  std::size_t pick(const std::vector<bool>& alive, bool want_max) const {
    const unsigned before = want_max ? 0 : 1;  // required ge(i, k) for alive i < k
    const unsigned after = want_max ? 1 : 0;   // required ge(k, j) for alive j > k
    for (std::size_t k = 0; k < n_; ++k) {
      if (!alive[k]) continue;
      bool ok = true;
      for (std::size_t i = 0; i < k && ok; ++i) ok = !alive[i] || ge(i, k) == before;
      for (std::size_t j = k + 1; j < n_ && ok; ++j) ok = !alive[j] || ge(k, j) == after;
      if (ok) return k;
    }
    std::size_t best = n_;
    long best_score = 0;
    for (std::size_t k = 0; k < n_; ++k) {
      if (!alive[k]) continue;
      long wins = 0;
      for (std::size_t j = 0; j < n_; ++j) {
        if (j == k || !alive[j]) continue;
        wins += k < j ? ge(k, j) : 1 - ge(j, k);
      }
      long score = want_max ? wins : -wins;
      if (best == n_ || score > best_score) {
        best = k;
        best_score = score;
      }
    }
    return best;
  }

  std::size_t n_;
  std::vector<std::uint8_t> bits_;
};

class SelectEngine final : public EngineBase {
 public:
  SelectEngine(const ProtocolSpec& spec, const EngineContext& ctx, std::vector<Word> inputs, std::size_t batch)
      : EngineBase(spec, ctx, batch), inputs_(std::move(inputs)), n_(spec.n) {
    sort_ = spec.kind == Kind::sort_desc || spec.kind == Kind::sort_asc;
    if (sort_) {
      layout_.a_count = n_;
      layout_.mirror_half = true;
      for (std::size_t k = 0; k < n_; ++k) {
        for (std::size_t j = 0; j < n_; ++j) layout_.a_of_b.push_back(static_cast<std::uint32_t>(j));
      }
    } else {
      layout_ = TripleLayout::independent(n_);
    }
  }

  std::vector<Message> send(int round) override {
    if (party() != 2) return round == 1 ? request() : std::vector<Message>{};
    return round == 2 ? respond() : std::vector<Message>{};
  }

  std::vector<Word> output() override {
    if (party() == 2) return {};
    const std::size_t slots = layout_.b_count();
    const std::size_t corr = party() == 0 ? layout_.corrections_to_p0() : layout_.corrections_to_p1();
    const std::size_t per = slots + corr;
    const auto& e_other = got(1, 1 - party(), batch_ * n_);
    const auto& from2 = got(2, 2, batch_ * per);
    const std::size_t rows = sort_ ? n_ : 1;
    std::vector<Word> out(batch_ * rows);
    std::vector<Word> e(n_);
    for (std::size_t i = 0; i < batch_; ++i) {
      TripleShares& tri = tris_[i];
      const Word* d = from2.data() + i * per;
      apply_corrections(tri, party(), layout_, std::span<const Word>(d + slots, corr));
      for (std::size_t j = 0; j < n_; ++j) e[j] = ring_.add(e_[i * n_ + j], e_other[i * n_ + j]);
      for (std::size_t k = 0; k < rows; ++k) {
        Word acc = 0;
        for (std::size_t j = 0; j < n_; ++j) {
          std::size_t slot = sort_ ? k * n_ + j : j;
          acc = ring_.add(acc, beaver_finish(ring_, party(), e[j], d[slot], tri.a[j], tri.b[slot], tri.c[slot]));
        }
        out[i * rows + k] = acc;
      }
    }
    return out;
  }

 private:
  std::size_t pairs() const { return n_ * (n_ - 1) / 2; }

  std::vector<Message> request() {
    auto masks = mask_source();
    PrgStream shuffle = stream(SeedLabel::S01, purpose::input_shuffle);
    PrgStream tri = stream(party() == 0 ? SeedLabel::S02 : SeedLabel::S12, purpose::triples);
    std::vector<Word> w;
    w.reserve(batch_ * pairs() * array_len());
    e_.resize(batch_ * n_);
    tris_.resize(batch_);
    std::vector<Word> phi(n_);
    for (std::size_t i = 0; i < batch_; ++i) {
      std::vector<std::uint32_t> perm = shuffle.permutation(n_);
      for (std::size_t j = 0; j < n_; ++j) phi[j] = inputs_[i * n_ + perm[j]];
      for (std::size_t a = 0; a < n_; ++a) {
        for (std::size_t b = a + 1; b < n_; ++b) {
          build_sign_array(ring_, ellx_, party(), ring_.sub(phi[a], phi[b]), 0, *masks, w, ctx_.sign_trace);
        }
      }
      tris_[i] = party() == 0 ? derive_triple_p0(ring_, layout_, tri) : derive_triple_p1(ring_, layout_, tri);
      for (std::size_t j = 0; j < n_; ++j) e_[i * n_ + j] = ring_.sub(phi[j], tris_[i].a[j]);
    }
    std::vector<Message> out;
    out.push_back({2, std::move(w)});
    out.push_back({1 - party(), e_});
    return out;
  }

  // Row-major selection: theta (1 x n) or the permutation matrix M (n x n).
  std::vector<unsigned> select(const CmpMatrix& cmp) const {
    std::vector<bool> alive(n_, true);
    switch (spec_.kind) {
      case Kind::max_n:
      case Kind::min_n: {
        std::vector<unsigned> theta(n_, 0);
        theta[spec_.kind == Kind::max_n ? cmp.argmax(alive) : cmp.argmin(alive)] = 1;
        return theta;
      }
      case Kind::median: {
        std::size_t pick = 0;
        for (std::size_t r = 0; r < (n_ + 1) / 2; ++r) {
          pick = cmp.argmax(alive);
          alive[pick] = false;
        }
        std::vector<unsigned> theta(n_, 0);
        theta[pick] = 1;
        return theta;
      }
      default: break;
    }
    // Sort: row k receives the k-th element of the requested order.
    const bool desc = spec_.kind == Kind::sort_desc;
    std::vector<unsigned> m(n_ * n_, 0);
    std::size_t front = 0, back = n_;
    while (front < back) {
      if (spec_.fast_sort && back - front >= 2) {
        std::size_t hi = cmp.argmax(alive);
        alive[hi] = false;
        std::size_t lo = cmp.argmin(alive);
        alive[lo] = false;
        m[front * n_ + (desc ? hi : lo)] = 1;
        m[(back - 1) * n_ + (desc ? lo : hi)] = 1;
        ++front;
        --back;
      } else {
        std::size_t k = desc ? cmp.argmax(alive) : cmp.argmin(alive);
        alive[k] = false;
        m[front * n_ + k] = 1;
        ++front;
      }
    }
    return m;
  }

  std::vector<Message> respond() {
    const std::size_t len = array_len();
    const auto& w0 = got(1, 0, batch_ * pairs() * len);
    const auto& w1 = got(1, 1, batch_ * pairs() * len);
    PrgStream t02 = stream(SeedLabel::S02, purpose::triples);
    PrgStream t12 = stream(SeedLabel::S12, purpose::triples);
    std::vector<Word> to0, to1;
    for (std::size_t i = 0; i < batch_; ++i) {
      CmpMatrix cmp(n_);
      std::size_t off = i * pairs() * len;
      for (std::size_t a = 0; a < n_; ++a) {
        for (std::size_t b = a + 1; b < n_; ++b) {
          cmp.set(a, b, sign_verdict(ring_, std::span<const Word>(w0.data() + off, len),
                                     std::span<const Word>(w1.data() + off, len), ctx_.p2_trace));
          off += len;
        }
      }
      std::vector<unsigned> sel = select(cmp);
      if (ctx_.p2_trace) ctx_.p2_trace->selection.insert(ctx_.p2_trace->selection.end(), sel.begin(), sel.end());
      TripleDealing deal = deal_triple_p2(ring_, layout_, t02, t12);
      for (std::size_t slot = 0; slot < layout_.b_count(); ++slot) {
        Word d = ring_.sub(sel[slot], ring_.add(deal.p0.b[slot], deal.p1.b[slot]));
        to0.push_back(d);
        to1.push_back(d);
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
  std::size_t n_;
  bool sort_ = false;
  TripleLayout layout_;
  std::vector<Word> e_;
  std::vector<TripleShares> tris_;
};

}  // namespace

std::unique_ptr<PartyEngine> make_select_engine(const ProtocolSpec& spec, const EngineContext& ctx,
                                                std::vector<Word> inputs, std::size_t batch) {
  return std::make_unique<SelectEngine>(spec, ctx, std::move(inputs), batch);
}

}  // namespace b3pc::detail
