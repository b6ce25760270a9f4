#include "b3pc/truncation.hpp"

#include <stdexcept>

namespace b3pc {

Word trunc_share_local(const Ring& ring, int party, Word share, unsigned k) {
  if (party == 0) return ring.rshift(share, k);
  return ring.neg(ring.rshift(ring.neg(share), k));
}

Word trunc_exact_oracle(const Ring& ring, unsigned ellx, Word x, unsigned k) {
  if (!in_input_range(ring, ellx, x)) throw std::out_of_range("truncation oracle input outside range");
  Word xi = magnitude(ring, ellx, x);
  Word s = xi >> k;
  return is_negative_input(ring, ellx, x) ? ring.neg(s) : s;
}

const char* trunc_class_name(TruncClass c) {
  switch (c) {
    case TruncClass::exact: return "exact";
    case TruncClass::plus_one: return "plusOne";
    case TruncClass::minus_one: return "minusOne";
    case TruncClass::wrap_failure: return "wrapFailure";
  }
  return "?";
}

bool in_wrap_failure_region(const Ring& ring, unsigned ellx, Word x, Word r) {
  Word xi = magnitude(ring, ellx, x);
  r = ring.reduce(r);
  if (!is_negative_input(ring, ellx, x)) return r < xi;
  // r + xi >= q, i.e. r >= q - xi with xi > 0
  return r >= ring.neg(xi);
}

TruncPrediction classify_truncation(const Ring& ring, unsigned ellx, Word x, Word r, unsigned k) {
  if (!in_input_range(ring, ellx, x)) throw std::out_of_range("classify_truncation input outside range");
  const Word low = (Word{1} << k) - 1;
  const Word xi = magnitude(ring, ellx, x);
  const Word r1 = ring.reduce(r) & low;
  const Word xi1 = xi & low;
  const Word xi2 = xi >> k;
  const Word wrap = k == 0 ? 0 : ring.reduce(Word{1} << (ring.bits() - k));
  const bool failure = k > 0 && in_wrap_failure_region(ring, ellx, x, r);

  TruncPrediction p;
  if (!is_negative_input(ring, ellx, x)) {
    bool bit = r1 < xi1;
    p.value = xi2 + (bit ? 1 : 0);
    p.cls = bit ? TruncClass::plus_one : TruncClass::exact;
    if (failure) p.value = ring.sub(p.value, wrap);
  } else {
    bool bit = r1 + xi1 >= (Word{1} << k);
    p.value = ring.neg(xi2 + (bit ? 1 : 0));
    p.cls = bit ? TruncClass::minus_one : TruncClass::exact;
    if (failure) p.value = ring.add(p.value, wrap);
  }
  if (failure) p.cls = TruncClass::wrap_failure;
  return p;
}

std::vector<Word> truncation_array(const Ring& ring, unsigned ellx, Word x, Word r) {
  Word s0 = ring.reduce(r);
  Word s1 = ring.sub(x, s0);
  std::vector<Word> out(ellx + 1);
  for (unsigned k = 0; k <= ellx; ++k) {
    out[k] = ring.add(trunc_share_local(ring, 0, s0, k), trunc_share_local(ring, 1, s1, k));
  }
  return out;
}

PatternVerdict truncation_pattern_check(const Ring& ring, unsigned ellx, Word x, Word r) {
  PatternVerdict v;
  if (!in_input_range(ring, ellx, x) || ring.reduce(x) == 0) {
    throw std::invalid_argument("pattern check needs a non-zero in-range input");
  }
  v.failure_region = in_wrap_failure_region(ring, ellx, x, r);
  const std::vector<Word> arr = truncation_array(ring, ellx, x, r);
  const Word target = is_negative_input(ring, ellx, x) ? ring.neg(1) : 1;
  const unsigned lambda = effective_bit_length(magnitude(ring, ellx, x));
  auto fail = [&](std::size_t i, const char* why) {
    v.ok = false;
    v.offending_index = static_cast<int>(i);
    v.reason = why;
    return v;
  };

  std::size_t i = 0;
  while (i < arr.size() && arr[i] != target && arr[i] != 0) ++i;
  if (i == arr.size() || arr[i] != target) return fail(i, "no run of the target value");
  std::size_t run_start = i;
  while (i < arr.size() && arr[i] == target) ++i;
  std::size_t run_end = i;  // exclusive
  bool covers = (lambda - 1 >= run_start && lambda - 1 < run_end) || (lambda >= run_start && lambda < run_end);
  if (!covers) return fail(run_start, "target run misses lambda-1 and lambda");
  for (; i < arr.size(); ++i) {
    if (arr[i] != 0) return fail(i, "non-zero value after the target run");
  }
  return v;
}

}  // namespace b3pc
