#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "sws/int128.hpp"

namespace sws {

// Exact rational number over 128-bit integers. Always kept reduced with a
// positive denominator; every operation is overflow-checked and throws
// std::overflow_error rather than silently wrapping.
class Rational {
 public:
  constexpr Rational() : num_(0), den_(1) {}
  Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT: implicit by design

  Rational(int128 n, int128 d) : num_(n), den_(d) {
    if (den_ == 0) throw std::domain_error("rational with zero denominator");
    normalize();
  }

  static Rational from_uint128(uint128 n, uint128 d) {
    constexpr uint128 limit = static_cast<uint128>(1) << 126;
    if (n >= limit || d >= limit)
      throw std::overflow_error("rational component exceeds 126 bits");
    return Rational(static_cast<int128>(n), static_cast<int128>(d));
  }

  int128 numerator() const noexcept { return num_; }
  int128 denominator() const noexcept { return den_; }

  bool is_zero() const noexcept { return num_ == 0; }
  bool is_integer() const noexcept { return den_ == 1; }
  int sign() const noexcept { return num_ < 0 ? -1 : (num_ > 0 ? 1 : 0); }

  Rational operator-() const { return Rational(checked_sub(0, num_), den_); }

  Rational abs() const { return num_ < 0 ? -*this : *this; }

  Rational operator+(const Rational& o) const {
    return Rational(
        checked_add(checked_mul(num_, o.den_), checked_mul(o.num_, den_)),
        checked_mul(den_, o.den_));
  }

  Rational operator-(const Rational& o) const { return *this + (-o); }

  Rational operator*(const Rational& o) const {
    return Rational(checked_mul(num_, o.num_), checked_mul(den_, o.den_));
  }

  Rational operator/(const Rational& o) const {
    if (o.num_ == 0) throw std::domain_error("rational division by zero");
    return Rational(checked_mul(num_, o.den_), checked_mul(den_, o.num_));
  }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  bool operator==(const Rational& o) const noexcept {
    return num_ == o.num_ && den_ == o.den_;
  }

  std::strong_ordering operator<=>(const Rational& o) const {
    int128 lhs = checked_mul(num_, o.den_);
    int128 rhs = checked_mul(o.num_, den_);
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  // floor(x + 1/2); round-half-up to the nearest integer.
  int128 round_half_up() const {
    int128 twice = checked_add(checked_mul(num_, 2), den_);
    int128 d = checked_mul(den_, 2);
    int128 q = twice / d;
    if (twice % d != 0 && twice < 0) --q;  // floor for negatives
    return q;
  }

  int128 floor() const {
    int128 q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return q;
  }

  long double to_long_double() const {
    return static_cast<long double>(num_) / static_cast<long double>(den_);
  }

  // Exact decimal expansion with at least `significant` significant digits
  // (more if the expansion terminates sooner).
  std::string to_decimal_string(unsigned significant = 15) const {
    if (num_ == 0) return "0";
    uint128 n = num_ < 0 ? static_cast<uint128>(-(num_ + 1)) + 1
                         : static_cast<uint128>(num_);
    uint128 d = static_cast<uint128>(den_);
    std::string out = num_ < 0 ? "-" : "";
    uint128 whole = n / d;
    uint128 rem = n % d;
    std::string whole_str = to_string_u128(whole);
    out += whole_str;
    unsigned sig = whole == 0 ? 0 : static_cast<unsigned>(whole_str.size());
    if (rem == 0 && sig >= significant) return out;
    out += '.';
    unsigned frac_digits = 0;
    constexpr unsigned max_frac = 64;
    while (frac_digits < max_frac && (sig < significant || frac_digits == 0)) {
      rem *= 10;
      uint128 digit = rem / d;
      rem %= d;
      out.push_back(static_cast<char>('0' + static_cast<unsigned>(digit)));
      ++frac_digits;
      if (sig > 0 || digit != 0) ++sig;
      if (rem == 0 && sig >= significant) break;
    }
    return out;
  }

  std::string numerator_string() const { return to_string_i128(num_); }
  std::string denominator_string() const { return to_string_i128(den_); }

 private:
  void normalize() {
    if (den_ < 0) {
      num_ = checked_sub(0, num_);
      den_ = checked_sub(0, den_);
    }
    if (num_ == 0) {
      den_ = 1;
      return;
    }
    uint128 a = num_ < 0 ? static_cast<uint128>(-(num_ + 1)) + 1
                         : static_cast<uint128>(num_);
    uint128 g = gcd_u128(a, static_cast<uint128>(den_));
    if (g > 1) {
      num_ /= static_cast<int128>(g);
      den_ /= static_cast<int128>(g);
    }
  }

  int128 num_;
  int128 den_;
};

inline Rational abs(const Rational& r) { return r.abs(); }

// Parses "p/q", a decimal like "0.015625", or a plain integer, all exactly.
inline Rational parse_rational(std::string_view text) {
  auto fail = [&] {
    throw std::invalid_argument("cannot parse rational: '" +
                                std::string(text) + "'");
  };
  if (text.empty()) fail();
  bool negative = false;
  std::size_t pos = 0;
  if (text[0] == '+' || text[0] == '-') {
    negative = text[0] == '-';
    pos = 1;
  }
  auto parse_digits = [&](std::size_t& p) -> uint128 {
    if (p >= text.size() || text[p] < '0' || text[p] > '9') fail();
    uint128 v = 0;
    constexpr uint128 limit = static_cast<uint128>(1) << 120;
    while (p < text.size() && text[p] >= '0' && text[p] <= '9') {
      v = v * 10 + static_cast<unsigned>(text[p] - '0');
      if (v >= limit) throw std::overflow_error("rational literal too large");
      ++p;
    }
    return v;
  };
  uint128 whole = parse_digits(pos);
  uint128 num = whole, den = 1;
  if (pos < text.size() && text[pos] == '/') {
    ++pos;
    den = parse_digits(pos);
    if (den == 0) fail();
  } else if (pos < text.size() && text[pos] == '.') {
    ++pos;
    std::size_t start = pos;
    uint128 frac = parse_digits(pos);
    for (std::size_t i = start; i < pos; ++i) den = checked_mul_u(den, 10);
    num = checked_mul_u(whole, den) + frac;
  }
  if (pos != text.size()) fail();
  Rational r = Rational::from_uint128(num, den);
  return negative ? -r : r;
}

}  // namespace sws
