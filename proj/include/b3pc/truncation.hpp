#pragma once

#include <string>
#include <vector>

#include "b3pc/ring.hpp"

namespace b3pc {

// P0: rShift(s, k). P1: q - rShift(q - s, k), with q - s taken mod q.
Word trunc_share_local(const Ring& ring, int party, Word share, unsigned k);

// Sign-aware exact shift of an in-range value. Out-of-range x throws.
Word trunc_exact_oracle(const Ring& ring, unsigned ellx, Word x, unsigned k);

enum class TruncClass { exact, plus_one, minus_one, wrap_failure };
const char* trunc_class_name(TruncClass c);

struct TruncPrediction {
  TruncClass cls = TruncClass::exact;
  Word value = 0;  // the reconstructed TRC(x, k) this class implies
};

// Shares [x]0 = r, [x]1 = x - r. Positive x needs r >= xi, negative x needs
// r + xi < q; outside that the result is off by 2^(ell-k).
bool in_wrap_failure_region(const Ring& ring, unsigned ellx, Word x, Word r);
TruncPrediction classify_truncation(const Ring& ring, unsigned ellx, Word x, Word r, unsigned k);

// Reconstructed TRC(x, k) for k = 0..ellx under the split [x]0 = r.
std::vector<Word> truncation_array(const Ring& ring, unsigned ellx, Word x, Word r);

struct PatternVerdict {
  bool ok = true;
  bool failure_region = false;
  int offending_index = -1;
  std::string reason;
};

// Over k = 0..ellx: a prefix of values other than 0 and the target (1, or q-1
// for negative x), a non-empty run of the target covering lambda-1 or lambda,
// then zeros to the end. x must be non-zero.
PatternVerdict truncation_pattern_check(const Ring& ring, unsigned ellx, Word x, Word r);

}  // namespace b3pc
