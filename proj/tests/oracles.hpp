#pragma once

// Test-side reference computations. Nothing here calls into the library's
// own truncation, plaintext or schedule code, so agreement is meaningful.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "b3pc/protocol.hpp"

namespace oracle {

using u128 = unsigned __int128;
using i64 = std::int64_t;

inline u128 modulus(unsigned ell) { return u128{1} << ell; }

inline std::uint64_t wrap(unsigned ell, i64 v) {
  const u128 q = modulus(ell);
  __int128 m = static_cast<__int128>(v) % static_cast<__int128>(q);
  if (m < 0) m += static_cast<__int128>(q);
  return static_cast<std::uint64_t>(m);
}

inline i64 lift(unsigned ell, std::uint64_t x) {
  const u128 q = modulus(ell);
  return x >= q / 2 ? static_cast<i64>(static_cast<__int128>(x) - static_cast<__int128>(q)) : static_cast<i64>(x);
}

// Reconstructed value of share-local truncation with [x]0 = r: P0 floors r,
// P1 floors the magnitude of its share read as a negative number.
inline std::uint64_t trunc_recon(unsigned ell, i64 x, std::uint64_t r, unsigned k) {
  const u128 q = modulus(ell);
  const u128 s1 = (static_cast<u128>(wrap(ell, x)) + q - r) % q;
  const u128 p0 = static_cast<u128>(r) / (u128{1} << k);
  const u128 p1 = (q - (((q - s1) % q) / (u128{1} << k))) % q;
  return static_cast<std::uint64_t>((p0 + p1) % q);
}

// The shares only add up without carry when P1's share, lifted to
// (-q, 0], plus r gives back x over the integers.
inline bool wraps(unsigned ell, i64 x, std::uint64_t r) {
  const u128 q = modulus(ell);
  const u128 s1 = (static_cast<u128>(wrap(ell, x)) + q - r) % q;
  const __int128 lifted = s1 == 0 ? 0 : static_cast<__int128>(s1) - static_cast<__int128>(q);
  return static_cast<__int128>(r) + lifted != x;
}

// Rounds the magnitude down, keeps the sign.
inline i64 exact_shift(i64 x, unsigned k) { return x >= 0 ? (x >> k) : -((-x) >> k); }

// --- plaintext definitions ---

inline i64 drelu(i64 x) { return x >= 0; }

inline std::vector<i64> evaluate(const b3pc::ProtocolSpec& s, const std::vector<i64>& in) {
  using b3pc::Kind;
  std::vector<i64> out;
  const auto& x = in;
  auto sorted_desc = [&] {
    std::vector<i64> v = in;
    std::sort(v.begin(), v.end(), std::greater<>());
    return v;
  };
  switch (s.kind) {
    case Kind::drelu:
    case Kind::rss_drelu: out = {drelu(x[0])}; break;
    case Kind::msb: out = {1 - drelu(x[0])}; break;
    case Kind::ucmp: out = {drelu(x[0] - x[1])}; break;
    case Kind::equality: out = {x[0] == x[1]}; break;
    case Kind::relu:
    case Kind::rss_relu: out = {std::max<i64>(x[0], 0)}; break;
    case Kind::abs: out = {x[0] < 0 ? -x[0] : x[0]}; break;
    case Kind::dynamic_relu: out = {x[0] >= 0 ? s.alpha1 * x[0] : s.alpha0 * x[0]}; break;
    case Kind::max2: out = {std::max(x[0], x[1])}; break;
    case Kind::min2: out = {std::min(x[0], x[1])}; break;
    case Kind::funnel: out = {std::max(x[0], s.funnel_scale * x[0] + s.funnel_offset)}; break;
    case Kind::plu: {
      // piece j covers [gamma[j-1], gamma[j])
      std::size_t j = 0;
      while (j < s.plu.gamma.size() && x[0] >= s.plu.gamma[j]) ++j;
      out = {s.plu.alpha[j] * x[0] + s.plu.beta[j]};
      break;
    }
    case Kind::max_n: out = {*std::max_element(x.begin(), x.end())}; break;
    case Kind::min_n: out = {*std::min_element(x.begin(), x.end())}; break;
    case Kind::sort_desc: out = sorted_desc(); break;
    case Kind::sort_asc: {
      out = sorted_desc();
      std::reverse(out.begin(), out.end());
      break;
    }
    case Kind::median: {
      auto v = sorted_desc();
      out = {v[(v.size() + 1) / 2 - 1]};
      break;
    }
  }
  return out;
}

// --- communication formulas, bits per instance, channels 01 02 12 10 20 21 ---

using Comm = std::array<std::uint64_t, 6>;

inline std::uint64_t ceil_half(std::uint64_t v) { return (v + 1) / 2; }

// Per-channel rows of the published table. Protocols outside it return false.
inline bool table_comm(const b3pc::ProtocolSpec& s, unsigned ell, unsigned ellx, Comm& c) {
  using b3pc::Kind;
  const std::uint64_t l = ell, lx = ellx, n = s.n;
  switch (s.kind) {
    case Kind::drelu:
    case Kind::msb:
      c = {0, (lx + 2) * l, (lx + 2) * l, 0, l, l};
      return true;
    case Kind::relu:
    case Kind::abs:
    case Kind::dynamic_relu:
    case Kind::max2:
    case Kind::min2:
    case Kind::funnel:
      c = {l, (lx + 2) * l, (lx + 2) * l, l, l, 2 * l};
      return true;
    case Kind::plu: {
      const std::uint64_t m = s.plu.gamma.size() - 1;
      c = {l, (m + 1) * (lx + 2) * l, (m + 1) * (lx + 2) * l, l, ceil_half(5 * m + 10) * l, (5 * m + 10) / 2 * l};
      return true;
    }
    case Kind::max_n:
    case Kind::min_n:
    case Kind::median:
      c = {n * l, n * (n - 1) / 2 * (lx + 2) * l, n * (n - 1) / 2 * (lx + 2) * l, n * l, ceil_half(3 * n) * l,
           3 * n / 2 * l};
      return true;
    case Kind::sort_desc:
    case Kind::sort_asc:
      c = {n * l, n * (n - 1) / 2 * (lx + 2) * l, n * (n - 1) / 2 * (lx + 2) * l, n * l, ceil_half(3 * n * n) * l,
           3 * n * n / 2 * l};
      return true;
    default: return false;
  }
}

// Published totals, for reporting where they disagree with the channel sum.
inline bool table_total(const b3pc::ProtocolSpec& s, unsigned ell, unsigned ellx, std::uint64_t& total) {
  using b3pc::Kind;
  const std::uint64_t l = ell, lx = ellx, n = s.n;
  switch (s.kind) {
    case Kind::drelu:
    case Kind::msb: total = (2 * lx + 4) * l; return true;
    case Kind::relu:
    case Kind::abs:
    case Kind::dynamic_relu:
    case Kind::max2:
    case Kind::min2:
    case Kind::funnel: total = (2 * lx + 9) * l; return true;
    case Kind::plu: {
      const std::uint64_t m = s.plu.gamma.size() - 1;
      total = ((2 * m + 1) * lx + 9 * m + 16) * l;
      return true;
    }
    case Kind::max_n:
    case Kind::min_n:
    case Kind::median: total = ((2 + lx) * n * n + 3 * n - lx * n) * l; return true;
    case Kind::sort_desc:
    case Kind::sort_asc: total = ((5 + lx) * n * n - lx * n) * l; return true;
    default: return false;
  }
}

}  // namespace oracle
