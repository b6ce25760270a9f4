#include "b3pc/plaintext.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace b3pc {

void PluSpec::validate() const {
  if (gamma.empty()) throw std::invalid_argument("PLU needs at least one breakpoint");
  if (alpha.size() != gamma.size() + 1 || beta.size() != gamma.size() + 1) {
    throw std::invalid_argument("PLU needs m+2 slopes and intercepts for m+1 breakpoints");
  }
  for (std::size_t j = 1; j < gamma.size(); ++j) {
    if (gamma[j] <= gamma[j - 1]) throw std::invalid_argument("PLU breakpoints must be strictly increasing");
  }
}

PluSpec PluSpec::relu6(unsigned frac_bits) {
  const std::int64_t six = std::int64_t{6} << frac_bits;
  return PluSpec{{0, six}, {0, 1, 0}, {0, 0, six}, false};
}

namespace plain {

Value plu(const PluSpec& spec, Value x) {
  spec.validate();
  std::size_t j = 0;
  while (j < spec.gamma.size() && x >= spec.gamma[j]) ++j;
  return spec.alpha[j] * x + spec.beta[j];
}

Value relu6(Value x, unsigned frac_bits) { return plu(PluSpec::relu6(frac_bits), x); }

Value max_n(const std::vector<Value>& xs) {
  if (xs.empty()) throw std::invalid_argument("max of nothing");
  return *std::max_element(xs.begin(), xs.end());
}

Value min_n(const std::vector<Value>& xs) {
  if (xs.empty()) throw std::invalid_argument("min of nothing");
  return *std::min_element(xs.begin(), xs.end());
}

std::vector<Value> sort_desc(std::vector<Value> xs) {
  std::sort(xs.begin(), xs.end(), std::greater<>());
  return xs;
}

std::vector<Value> sort_asc(std::vector<Value> xs) {
  std::sort(xs.begin(), xs.end());
  return xs;
}

Value median(const std::vector<Value>& xs) {
  if (xs.empty()) throw std::invalid_argument("median of nothing");
  auto sorted = sort_desc(xs);
  return sorted[(xs.size() + 1) / 2 - 1];
}

}  // namespace plain
}  // namespace b3pc
