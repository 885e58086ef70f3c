#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace sws {

using int128 = __int128;
using uint128 = unsigned __int128;

inline int128 checked_add(int128 a, int128 b) {
  int128 r;
  if (__builtin_add_overflow(a, b, &r))
    throw std::overflow_error("128-bit addition overflow");
  return r;
}

inline int128 checked_sub(int128 a, int128 b) {
  int128 r;
  if (__builtin_sub_overflow(a, b, &r))
    throw std::overflow_error("128-bit subtraction overflow");
  return r;
}

inline int128 checked_mul(int128 a, int128 b) {
  int128 r;
  if (__builtin_mul_overflow(a, b, &r))
    throw std::overflow_error("128-bit multiplication overflow");
  return r;
}

inline uint128 checked_mul_u(uint128 a, uint128 b) {
  uint128 r;
  if (__builtin_mul_overflow(a, b, &r))
    throw std::overflow_error("128-bit multiplication overflow");
  return r;
}

inline uint128 gcd_u128(uint128 a, uint128 b) {
  while (b != 0) {
    uint128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// ceil(a / b) for b > 0.
inline std::uint64_t ceil_div_u64(std::uint64_t a, std::uint64_t b) {
  return a / b + (a % b != 0 ? 1 : 0);
}

inline uint128 ceil_div_u128(uint128 a, uint128 b) {
  return a / b + (a % b != 0 ? 1 : 0);
}

// Number of bits needed to address n distinct values; ceil(log2 n) with
// ceil_log2(1) == 0 (a single-valued field carries no information).
inline unsigned ceil_log2(std::uint64_t n) {
  if (n <= 1) return 0;
  return static_cast<unsigned>(std::bit_width(n - 1));
}

inline unsigned ceil_log2_u128(uint128 n) {
  if (n <= 1) return 0;
  uint128 v = n - 1;
  unsigned bits = 0;
  while (v != 0) {
    v >>= 1;
    ++bits;
  }
  return bits;
}

// floor(log2 n) for n >= 1.
inline unsigned floor_log2(std::uint64_t n) {
  if (n == 0) throw std::domain_error("floor_log2(0)");
  return static_cast<unsigned>(std::bit_width(n)) - 1u;
}

inline std::string to_string_u128(uint128 v) {
  if (v == 0) return "0";
  std::string out;
  while (v != 0) {
    out.push_back(static_cast<char>('0' + static_cast<unsigned>(v % 10)));
    v /= 10;
  }
  return std::string(out.rbegin(), out.rend());
}

inline std::string to_string_i128(int128 v) {
  if (v < 0) return "-" + to_string_u128(static_cast<uint128>(-(v + 1)) + 1);
  return to_string_u128(static_cast<uint128>(v));
}

}  // namespace sws
