#include "npart/magnitude.hpp"

#include <cctype>

namespace npart {

Magnitude Magnitude::from_decimal(std::string_view text) {
  if (text.empty()) {
    throw std::invalid_argument("Magnitude: empty decimal string");
  }
  for (char c : text) {
    if (c < '0' || c > '9') {
      throw std::invalid_argument("Magnitude: invalid decimal digit in '" +
                                  std::string(text) + "'");
    }
  }
  Magnitude m;
  m.rep_ = Rep(std::string(text));
  return m;
}

u128 Magnitude::to_u128() const {
  if (!fits_u128()) {
    throw std::invalid_argument("Magnitude: value does not fit in 128 bits");
  }
  constexpr std::uint64_t kMask = ~std::uint64_t{0};
  auto lo = static_cast<std::uint64_t>(rep_ & kMask);
  auto hi = static_cast<std::uint64_t>((rep_ >> 64) & kMask);
  return (static_cast<u128>(hi) << 64) | lo;
}

}  // namespace npart
