#pragma once

#include <cmath>
#include <cstdint>

#include "sws/errors.hpp"
#include "sws/int128.hpp"
#include "sws/rational.hpp"

namespace sws::bounds {

// Deterministic counting lower bound from the block-language argument:
// floor(W / floor(2 W eps + 1)) distinguishable configurations.
inline std::uint64_t count_lower_bound_blocks(std::uint64_t window,
                                              const Rational& epsilon) {
  uint128 num = static_cast<uint128>(epsilon.numerator());
  uint128 den = static_cast<uint128>(epsilon.denominator());
  uint128 block = (checked_mul_u(2 * num, window) + den) / den;
  return static_cast<std::uint64_t>(window / block);
}

// max(floor(1/(2 eps + 1/W)), floor(log2 W)) bits, valid for eps <= 1/4.
inline std::uint64_t count_lower_bound(std::uint64_t window,
                                       const Rational& epsilon) {
  if (window < 2) throw std::invalid_argument("lower bound needs window >= 2");
  if (epsilon.sign() <= 0 || epsilon > Rational(1, 4))
    throw RegimeError("theorem precondition violated: epsilon must be <= 1/4");
  uint128 num = static_cast<uint128>(epsilon.numerator());
  uint128 den = static_cast<uint128>(epsilon.denominator());
  // 1/(2 eps + 1/W) = W den / (2 num W + den)
  uint128 value = checked_mul_u(den, window) /
                  (checked_mul_u(2 * num, window) + den);
  std::uint64_t from_blocks = static_cast<std::uint64_t>(value);
  std::uint64_t from_cycles = floor_log2(window);
  return from_blocks > from_cycles ? from_blocks : from_cycles;
}

// Explicit state-size formula of the counting sketch: 1/(2 eps) + 2 log2 W + 6.
inline long double count_upper_theory(std::uint64_t window,
                                      const Rational& epsilon) {
  if (window == 0) throw std::invalid_argument("window must be >= 1");
  Rational half_inverse = Rational(1) / (Rational(2) * epsilon);
  return half_inverse.to_long_double() +
         2.0L * std::log2(static_cast<long double>(window)) + 6.0L;
}

// Per-element information bound W log2(1/(2 W eps) + 1), the small-epsilon
// state-size formula; requires eps <= 1/(2W).
inline long double succinct_bound(std::uint64_t window,
                                  const Rational& epsilon) {
  if (window == 0) throw std::invalid_argument("window must be >= 1");
  Rational limit = Rational(1) / Rational(static_cast<std::int64_t>(2) *
                                          static_cast<std::int64_t>(window));
  if (epsilon.sign() <= 0 || epsilon > limit)
    throw RegimeError("succinct bound applies only for epsilon <= 1/(2W)");
  Rational inner = Rational(1) / (Rational(2) *
                                  Rational(static_cast<std::int64_t>(window)) *
                                  epsilon) +
                   Rational(1);
  return static_cast<long double>(window) *
         std::log2(inner.to_long_double());
}

// Summing lower bound: W log2(floor(1/(4 W eps) + 1)) letters per position
// when eps <= 1/(2W), otherwise the counting bound with eps capped at 1/4.
// The value range only shifts the letter alphabet, not the bit count.
inline long double sum_lower_bound(std::uint64_t window, std::uint64_t range,
                                   const Rational& epsilon) {
  (void)range;
  if (window < 2) throw std::invalid_argument("lower bound needs window >= 2");
  if (epsilon.sign() <= 0) throw std::invalid_argument("epsilon must be > 0");
  Rational small_limit =
      Rational(1) / Rational(static_cast<std::int64_t>(2) *
                             static_cast<std::int64_t>(window));
  if (epsilon <= small_limit) {
    // floor(1/(4 W eps) + 1) = floor((den + 4 W num) / (4 W num))
    uint128 num = static_cast<uint128>(epsilon.numerator());
    uint128 den = static_cast<uint128>(epsilon.denominator());
    uint128 four_w_num = checked_mul_u(4 * num, window);
    uint128 letters = (den + four_w_num) / four_w_num;
    return static_cast<long double>(window) *
           std::log2(static_cast<long double>(letters));
  }
  Rational capped = epsilon > Rational(1, 4) ? Rational(1, 4) : epsilon;
  return static_cast<long double>(count_lower_bound(window, capped));
}

}  // namespace sws::bounds
