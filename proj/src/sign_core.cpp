#include <array>
#include <stdexcept>

#include "b3pc/truncation.hpp"
#include "engines.hpp"

namespace b3pc::detail {

namespace {
constexpr std::size_t kMaxSlots = 66;
}

void build_sign_array(const Ring& ring, unsigned ellx, int party, Word x, unsigned t, MaskSource& masks,
                      std::vector<Word>& out, std::vector<SignTrace>* trace) {
  const std::size_t len = ellx + 2;
  if (len > kMaxSlots) throw std::invalid_argument("input width too large for the sign array");
  const Word one = party == 0 ? 1 : 0;
  const Word xs = t ? ring.neg(x) : x;

  // Slot 0 is u_*, slot k+1 is u_k = TRC(xs, k).
  std::array<Word, kMaxSlots> u, v, r, m;
  u[0] = party == 0 ? one_minus_2t(ring, t) : 0;
  for (unsigned k = 0; k <= ellx; ++k) u[k + 1] = trunc_share_local(ring, party, xs, k);

  v[0] = ring.sub(ring.add(u[0], ring.mul(3, u[1])), one);
  Word acc = 0;
  for (unsigned k = ellx + 1; k >= 1; --k) {
    acc = ring.add(acc, u[k]);
    v[k] = ring.sub(acc, one);
  }

  for (std::size_t i = 0; i < len; ++i) {
    r[i] = masks.mask(ring);
    m[i] = ring.mul(r[i], v[i]);
  }
  std::vector<std::uint32_t> perm = masks.permutation(len);
  const std::size_t base = out.size();
  out.resize(base + len);
  for (std::size_t slot = 0; slot < len; ++slot) {
    Word pad = masks.pad(ring);
    out[base + slot] = party == 0 ? ring.add(m[perm[slot]], pad) : ring.sub(m[perm[slot]], pad);
  }
  if (trace) {
    auto vec = [len](const std::array<Word, kMaxSlots>& a) { return std::vector<Word>(a.begin(), a.begin() + len); };
    std::vector<Word> w(out.begin() + base, out.end());
    trace->push_back(SignTrace{t, vec(u), vec(v), vec(r), std::move(perm), std::move(w)});
  }
}

unsigned sign_verdict(const Ring& ring, std::span<const Word> w0, std::span<const Word> w1, P2Trace* trace) {
  unsigned zero = 0;
  if (!trace) {
    for (std::size_t i = 0; i < w0.size(); ++i) zero |= ring.add(w0[i], w1[i]) == 0;
    return zero;
  }
  std::vector<Word> w(w0.size());
  for (std::size_t i = 0; i < w0.size(); ++i) {
    w[i] = ring.add(w0[i], w1[i]);
    if (w[i] == 0) zero = 1;
  }
  trace->w.push_back(std::move(w));
  trace->verdicts.push_back(zero);
  return zero;
}

}  // namespace b3pc::detail
