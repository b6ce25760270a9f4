#pragma once

#include <cstdint>
#include <vector>

#include "b3pc/plu_spec.hpp"

// Reference definitions of the non-linear functions on plain signed integers.
namespace b3pc::plain {

using Value = std::int64_t;

inline Value drelu(Value x) { return x >= 0 ? 1 : 0; }
inline Value msb(Value x) { return 1 - drelu(x); }
inline Value relu(Value x) { return x >= 0 ? x : 0; }
inline Value abs(Value x) { return x >= 0 ? x : -x; }
inline Value dynamic_relu(Value x, Value alpha0, Value alpha1) { return x >= 0 ? alpha1 * x : alpha0 * x; }
inline Value cmp(Value x, Value y) { return drelu(x - y); }
inline Value equality(Value x, Value y) { return x == y ? 1 : 0; }
inline Value max2(Value x, Value y) { return x >= y ? x : y; }
inline Value min2(Value x, Value y) { return x >= y ? y : x; }
inline Value funnel(Value x, Value scale, Value offset) { return max2(x, scale * x + offset); }

Value plu(const PluSpec& spec, Value x);
Value relu6(Value x, unsigned frac_bits = 0);

Value max_n(const std::vector<Value>& xs);
Value min_n(const std::vector<Value>& xs);
std::vector<Value> sort_desc(std::vector<Value> xs);
std::vector<Value> sort_asc(std::vector<Value> xs);
// ceil(n/2)-th largest.
Value median(const std::vector<Value>& xs);

}  // namespace b3pc::plain
