#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>

#include "sws/errors.hpp"
#include "sws/int128.hpp"

namespace sws {

// Common denominator for the summing sketches' remainder arithmetic. Values
// are kept as integers over D = blocks * 2^frac_bits, so that both the
// rounded inputs (denominator 2^frac_bits) and the per-block unit W/blocks
// (denominator blocks) are exactly representable and no drift accumulates.
struct Scale {
  unsigned frac_bits = 0;    // fractional bits of the rounded input
  std::uint64_t blocks = 1;  // number of blocks k

  Scale() = default;

  Scale(unsigned frac_bits_in, std::uint64_t blocks_in)
      : frac_bits(frac_bits_in), blocks(blocks_in) {
    if (blocks == 0) throw std::invalid_argument("scale needs blocks >= 1");
    if (frac_bits + ceil_log2(blocks) > 120)
      throw RegimeError("fixed-point scale exceeds 128-bit capacity");
  }

  uint128 denominator() const {
    return static_cast<uint128>(blocks) << frac_bits;
  }

  bool operator==(const Scale&) const = default;
};

// Non-negative quantity expressed as raw / scale.denominator().
struct ScaledValue {
  uint128 raw = 0;
};

// Rounds x/range to the nearest multiple of 2^-frac_bits, ties upward, and
// returns the numerator over 2^frac_bits. The result differs from x/range by
// at most 2^-(frac_bits+1).
inline std::uint64_t round_frac(std::uint64_t x, std::uint64_t range,
                                unsigned frac_bits) {
  if (range == 0) throw std::invalid_argument("round_frac needs range >= 1");
  if (x > range)
    throw std::out_of_range("round_frac input exceeds range");
  if (frac_bits > 62 || std::bit_width(x) + frac_bits + 1 > 127)
    throw std::overflow_error("round_frac precision exceeds capacity");
  // half-up: floor((x * 2^(frac_bits+1) + range) / (2 * range))
  uint128 numerator = (static_cast<uint128>(x) << (frac_bits + 1)) + range;
  return static_cast<std::uint64_t>(numerator /
                                    (static_cast<uint128>(range) * 2));
}

// Lifts a numerator over 2^frac_bits into the common denominator.
inline ScaledValue to_scaled(std::uint64_t numerator, const Scale& scale) {
  return ScaledValue{checked_mul_u(static_cast<uint128>(numerator),
                                   static_cast<uint128>(scale.blocks))};
}

}  // namespace sws
