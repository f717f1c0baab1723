#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace npart {

using u128 = unsigned __int128;

/// Exact non-negative integer. Weights, subset sums and partition
/// differences live here; arithmetic, comparison and decimal
/// parse/print round-trip losslessly at any width.
class Magnitude {
 public:
  using Rep = boost::multiprecision::cpp_int;

  Magnitude() = default;
  Magnitude(std::uint64_t value) : rep_(value) {}
  explicit Magnitude(Rep value) : rep_(std::move(value)) {
    if (rep_.sign() < 0) {
      throw std::invalid_argument("Magnitude: negative value");
    }
  }

  /// Parses a plain decimal string (digits only, no sign, no whitespace).
  static Magnitude from_decimal(std::string_view text);

  /// 2^bits
  static Magnitude pow2(unsigned bits) {
    Magnitude m;
    m.rep_ = Rep(1) << bits;
    return m;
  }

  static Magnitude from_u128(u128 value) {
    Magnitude m;
    m.rep_ = Rep(static_cast<std::uint64_t>(value >> 64));
    m.rep_ <<= 64;
    m.rep_ |= static_cast<std::uint64_t>(value);
    return m;
  }

  std::string to_decimal() const { return rep_.str(); }
  double to_double() const { return rep_.convert_to<double>(); }

  bool fits_u128() const {
    return rep_.is_zero() || boost::multiprecision::msb(rep_) < 128;
  }
  u128 to_u128() const;

  bool is_zero() const { return rep_.is_zero(); }
  bool odd() const { return boost::multiprecision::bit_test(rep_, 0); }

  Magnitude& operator+=(const Magnitude& rhs) {
    rep_ += rhs.rep_;
    return *this;
  }
  friend Magnitude operator+(Magnitude lhs, const Magnitude& rhs) {
    lhs += rhs;
    return lhs;
  }

  /// Subtraction, defined only for *this >= rhs.
  Magnitude& operator-=(const Magnitude& rhs) {
    rep_ -= rhs.rep_;
    if (rep_.sign() < 0) {
      throw std::invalid_argument("Magnitude: subtraction underflow");
    }
    return *this;
  }
  friend Magnitude operator-(Magnitude lhs, const Magnitude& rhs) {
    lhs -= rhs;
    return lhs;
  }

  /// |a - b|
  friend Magnitude abs_diff(const Magnitude& a, const Magnitude& b) {
    Magnitude m;
    m.rep_ = a.rep_ >= b.rep_ ? Rep(a.rep_ - b.rep_) : Rep(b.rep_ - a.rep_);
    return m;
  }

  friend bool operator==(const Magnitude& a, const Magnitude& b) {
    return a.rep_ == b.rep_;
  }
  friend std::strong_ordering operator<=>(const Magnitude& a,
                                          const Magnitude& b) {
    return a.rep_.compare(b.rep_) <=> 0;
  }

  /// Backing integer, for modules that need full arithmetic (stats,
  /// exact rational rendering). The value is always >= 0.
  const Rep& rep() const { return rep_; }

 private:
  Rep rep_;
};

}  // namespace npart
