#include "b3pc/fixed_point.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace b3pc {

FixedPointCodec::FixedPointCodec(const RingParams& params)
    : ring_(params.ell), ellx_(params.ellx), frac_(params.frac_bits) {
  params.validate();
}

double FixedPointCodec::resolution() const { return std::ldexp(1.0, -static_cast<int>(frac_)); }

Word FixedPointCodec::encode(double v) const {
  if (!std::isfinite(v)) throw std::invalid_argument("non-finite fixed-point value");
  double scaled = std::nearbyint(std::ldexp(v, static_cast<int>(frac_)));
  double bound = std::ldexp(1.0, static_cast<int>(ellx_));
  if (std::fabs(scaled) >= bound) throw std::out_of_range("value " + std::to_string(v) + " not representable");
  return ring_.from_signed(static_cast<std::int64_t>(scaled));
}

double FixedPointCodec::decode(Word x) const {
  return std::ldexp(static_cast<double>(ring_.to_signed(x)), -static_cast<int>(frac_));
}

Word FixedPointCodec::mul_rescale(Word a, Word b) const {
  __int128 p = static_cast<__int128>(ring_.to_signed(a)) * ring_.to_signed(b);
  bool negative = p < 0;
  unsigned __int128 mag = negative ? static_cast<unsigned __int128>(-p) : static_cast<unsigned __int128>(p);
  auto shifted = static_cast<std::int64_t>(mag >> frac_);
  return ring_.from_signed(negative ? -shifted : shifted);
}

}  // namespace b3pc
