#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "sws/bit_io.hpp"
#include "sws/count_sketch.hpp"
#include "sws/errors.hpp"
#include "sws/fixed_point.hpp"
#include "sws/int128.hpp"
#include "sws/rational.hpp"
#include "sws/steps.hpp"

namespace sws {

enum class SumVariant {
  // Block algorithm: k <= W blocks of block_size elements, one mark bit each.
  kLargeEps,
  // Per-element algorithm for small epsilon: W cells, k >= W virtual blocks.
  kSmallEps,
};

// Validated configuration for the sliding-window summing sketch over integers
// in [0, range]. Inputs are scaled to [0, 1] and rounded to frac_bits
// fractional bits; the block count absorbs the rounding term so the total
// additive error stays within range * window * epsilon.
struct SumParams {
  std::uint64_t window = 0;  // W >= 2
  std::uint64_t range = 0;   // R, element values lie in [0, R]
  Rational epsilon;
  SumVariant variant = SumVariant::kLargeEps;
  unsigned frac_bits = 0;        // rho
  std::uint64_t blocks = 0;      // k
  std::uint64_t block_size = 0;  // window / blocks (kLargeEps only, else 1)
  std::uint64_t cell_bound = 1;  // max cell value (1 for kLargeEps)
  unsigned cell_width = 1;       // bits per stored cell

  Scale scale() const { return Scale(frac_bits, blocks); }

  std::uint64_t cell_count() const {
    return variant == SumVariant::kLargeEps ? blocks : window;
  }

  // Chooses the variant: the block algorithm whenever its divisor-adjusted
  // block count fits the window, the per-element algorithm otherwise. This
  // realizes the epsilon ~ 1/(2W) split without the caller knowing the
  // threshold.
  static SumParams derive(std::uint64_t window, std::uint64_t range,
                          const Rational& epsilon) {
    if (window < 2) throw RegimeError("summing needs window >= 2");
    if (range == 0) throw std::invalid_argument("range must be >= 1");
    if (epsilon.sign() <= 0 || epsilon > Rational(1, 2))
      throw std::invalid_argument("epsilon must be in (0, 1/2]");
    // Below 1/(2 R W) the allowed error is under half a unit: exact summing.
    Rational exact_threshold =
        Rational(1) / (Rational(2) * Rational(static_cast<std::int64_t>(range)) *
                       Rational(static_cast<std::int64_t>(window)));
    if (epsilon < exact_threshold)
      throw RegimeError("exact summing required: epsilon < 1/(2RW)");

    SumParams p;
    p.window = window;
    p.range = range;
    p.epsilon = epsilon;

    unsigned rho_large = large_eps_frac_bits(window, epsilon);
    uint128 k_large = min_blocks_for(epsilon, rho_large);
    if (k_large <= window) {
      p.variant = SumVariant::kLargeEps;
      p.frac_bits = rho_large;
      p.blocks = CountParams::smallest_divisor_at_least(
          window, static_cast<std::uint64_t>(k_large));
      p.block_size = window / p.blocks;
      p.cell_bound = 1;
      p.cell_width = 1;
    } else {
      p.variant = SumVariant::kSmallEps;
      p.frac_bits = small_eps_frac_bits(window, epsilon);
      uint128 k = min_blocks_for(epsilon, p.frac_bits);
      // k >= W in the small-eps regime proper; the narrow crack between the
      // regimes can produce a slightly smaller k, which is safe to raise.
      if (k < window) k = window;
      if (k > (static_cast<uint128>(1) << 62))
        throw RegimeError("block count exceeds 64-bit capacity");
      p.blocks = static_cast<std::uint64_t>(k);
      p.block_size = 1;
      p.cell_bound = ceil_div_u64(p.blocks, window);
      p.cell_width = ceil_log2(p.cell_bound + 1);
    }
    if (p.frac_bits + ceil_log2(p.blocks) + ceil_log2(2 * p.window) > 120)
      throw RegimeError("parameters exceed fixed-point capacity");
    return p;
  }

  bool operator==(const SumParams&) const = default;

 private:
  // Smallest r with 2^r >= log2(window) / epsilon. Exact for power-of-two
  // windows; otherwise resolved in long double (64-bit mantissa), far beyond
  // the precision the ceiling can distinguish at realistic inputs.
  static unsigned large_eps_frac_bits(std::uint64_t window,
                                      const Rational& epsilon) {
    uint128 num = static_cast<uint128>(epsilon.numerator());
    uint128 den = static_cast<uint128>(epsilon.denominator());
    if ((window & (window - 1)) == 0) {
      uint128 target = checked_mul_u(den, floor_log2(window));
      unsigned r = 0;
      while ((num << r) < target) {
        ++r;
        if (r > 110) throw RegimeError("fractional bits exceed capacity");
      }
      return r;
    }
    long double target = static_cast<long double>(den) /
                         static_cast<long double>(num) *
                         std::log2(static_cast<long double>(window));
    unsigned r = 0;
    while (static_cast<long double>(static_cast<uint128>(1) << r) < target) {
      ++r;
      if (r > 110) throw RegimeError("fractional bits exceed capacity");
    }
    return r;
  }

  // Smallest r with 2^r >= window / epsilon, exactly.
  static unsigned small_eps_frac_bits(std::uint64_t window,
                                      const Rational& epsilon) {
    uint128 num = static_cast<uint128>(epsilon.numerator());
    uint128 den = static_cast<uint128>(epsilon.denominator());
    uint128 target = checked_mul_u(den, window);
    unsigned r = 0;
    while ((num << r) < target) {
      ++r;
      if (r > 110) throw RegimeError("fractional bits exceed capacity");
    }
    return r;
  }

  // ceil(1 / (2 eps - 2^-rho)), exactly; positive because rho is chosen with
  // 2^-rho <= eps.
  static uint128 min_blocks_for(const Rational& epsilon, unsigned rho) {
    uint128 num = static_cast<uint128>(epsilon.numerator());
    uint128 den = static_cast<uint128>(epsilon.denominator());
    uint128 scaled_num = checked_mul_u(num, static_cast<uint128>(1) << rho);
    if (2 * scaled_num <= den)
      throw RegimeError("rounding precision cancels the error budget");
    return ceil_div_u128(checked_mul_u(den, static_cast<uint128>(1) << rho),
                         2 * scaled_num - den);
  }
};

// Additive-error sum of the last W integers in [0, range]. Each input is
// rounded to frac_bits fractional bits of its fraction of `range`; the
// remainder of whatever is not yet committed to a cell is propagated forward.
// All state transitions are integer arithmetic over the common denominator
// blocks * 2^frac_bits, so replaying a stream is bit-exact. A fresh sketch
// behaves as if W zeros preceded the stream.
class SumSketch {
 public:
  explicit SumSketch(SumParams params)
      : params_(std::move(params)),
        cells_(params_.cell_count(), params_.cell_width),
        denominator_(params_.scale().denominator()),
        block_raw_(static_cast<uint128>(params_.window)
                   << params_.frac_bits) {}

  const SumParams& params() const noexcept { return params_; }

  void add(std::uint64_t value) {
    if (value > params_.range)
      throw std::out_of_range("sum stream value exceeds range");
    std::uint64_t rounded = round_frac(value, params_.range, params_.frac_bits);
    uint128 scaled = static_cast<uint128>(rounded) * params_.blocks;
    detail::step();
    if (params_.variant == SumVariant::kLargeEps) {
      if (offset_ == params_.block_size - 1) {
        cell_total_ -= cells_.get(cursor_);
        bool mark = remainder_raw_ + scaled >= block_raw_;
        remainder_raw_ = mark ? remainder_raw_ + scaled - block_raw_
                              : remainder_raw_ + scaled;
        cells_.set(cursor_, mark);
        cell_total_ += mark;
        detail::step();
        offset_ = 0;
        cursor_ = cursor_ + 1 == params_.blocks ? 0 : cursor_ + 1;
        detail::step();
      } else {
        remainder_raw_ += scaled;
        ++offset_;
        detail::step();
      }
    } else {
      cell_total_ -= cells_.get(cursor_);
      uint128 carry = remainder_raw_ + scaled;
      std::uint64_t cell = static_cast<std::uint64_t>(carry / block_raw_);
      remainder_raw_ = carry - static_cast<uint128>(cell) * block_raw_;
      detail::step();
      cells_.set(cursor_, cell);
      cell_total_ += cell;
      detail::step();
      cursor_ = cursor_ + 1 == params_.window ? 0 : cursor_ + 1;
      detail::step();
    }
  }

  // range * (unit * cell_total + remainder - unit/2 - offset * oldest cell),
  // where unit is W/k in window units; exact rational, unclamped.
  Rational query() const {
    detail::step();
    int128 unit = static_cast<int128>(block_raw_);
    int128 committed =
        checked_mul(unit, static_cast<int128>(cell_total_));
    int128 expired = checked_mul(
        checked_mul(static_cast<int128>(offset_),
                    static_cast<int128>(cells_.get(cursor_))),
        static_cast<int128>(denominator_));
    int128 twice = checked_sub(
        checked_sub(
            checked_mul(2, checked_add(committed,
                                       static_cast<int128>(remainder_raw_))),
            unit),
        checked_mul(2, expired));
    return Rational(checked_mul(static_cast<int128>(params_.range), twice),
                    checked_mul(2, static_cast<int128>(denominator_)));
  }

  // State readouts.
  uint128 remainder_raw() const noexcept { return remainder_raw_; }
  uint128 denominator() const noexcept { return denominator_; }
  std::uint64_t cell_total() const noexcept { return cell_total_; }
  std::uint64_t offset() const noexcept { return offset_; }
  std::uint64_t cursor() const noexcept { return cursor_; }
  std::uint64_t cell(std::uint64_t index) const { return cells_.get(index); }

  // State bits with the remainder accounted at its theoretical width (integer
  // part to 2 * block_size plus frac_bits); the extra resolution of the exact
  // common denominator is reported separately as denominator_overhead_bits.
  std::uint64_t packed_bits() const noexcept {
    const auto& p = params_;
    if (p.variant == SumVariant::kLargeEps) {
      return p.blocks + ceil_log2(2 * p.block_size) + p.frac_bits +
             ceil_log2(p.block_size) + ceil_log2(p.blocks) +
             ceil_log2(p.blocks + 1);
    }
    return p.window * p.cell_width + p.frac_bits + ceil_log2(p.window) +
           ceil_log2(p.blocks + 1);
  }

  std::uint64_t denominator_overhead_bits() const noexcept {
    const auto& p = params_;
    if (p.variant == SumVariant::kLargeEps)
      return remainder_store_bits() - (ceil_log2(2 * p.block_size) + p.frac_bits);
    return ceil_log2(p.window);
  }

  // Little-endian bit packing in field order (cells, remainder, offset,
  // cursor, total); exactly packed_bits() + denominator_overhead_bits() bits.
  std::vector<std::uint8_t> serialize() const {
    const auto& p = params_;
    BitWriter out;
    for (std::uint64_t c = 0; c < p.cell_count(); ++c)
      out.push(cells_.get(c), p.cell_width);
    out.push(remainder_raw_, static_cast<unsigned>(remainder_store_bits()));
    if (p.variant == SumVariant::kLargeEps)
      out.push(offset_, ceil_log2(p.block_size));
    out.push(cursor_, ceil_log2(p.cell_count()));
    out.push(cell_total_, ceil_log2(p.blocks + 1));
    assert(out.bit_count() == packed_bits() + denominator_overhead_bits());
    return std::move(out).take();
  }

  static SumSketch deserialize(SumParams params,
                               std::span<const std::uint8_t> bytes) {
    SumSketch sk(std::move(params));
    const auto& p = sk.params_;
    BitReader in(bytes);
    std::uint64_t total = 0;
    for (std::uint64_t c = 0; c < p.cell_count(); ++c) {
      std::uint64_t v = in.read_u64(p.cell_width);
      if (v > p.cell_bound)
        throw std::invalid_argument("sum sketch cell exceeds bound");
      sk.cells_.set(c, v);
      total += v;
    }
    sk.remainder_raw_ = in.read(static_cast<unsigned>(sk.remainder_store_bits()));
    if (p.variant == SumVariant::kLargeEps)
      sk.offset_ = in.read_u64(ceil_log2(p.block_size));
    sk.cursor_ = in.read_u64(ceil_log2(p.cell_count()));
    sk.cell_total_ = in.read_u64(ceil_log2(p.blocks + 1));
    std::size_t expected_bits =
        sk.packed_bits() + sk.denominator_overhead_bits();
    if (bytes.size() != (expected_bits + 7) / 8 || !in.padding_clear())
      throw std::invalid_argument("sum sketch payload corrupt");
    bool remainder_ok =
        p.variant == SumVariant::kLargeEps
            ? sk.remainder_raw_ < 2 * sk.block_raw_
            : sk.remainder_raw_ < sk.block_raw_;
    if (sk.cell_total_ != total || !remainder_ok ||
        sk.offset_ >= p.block_size || sk.cursor_ >= p.cell_count())
      throw std::invalid_argument("sum sketch payload violates invariants");
    return sk;
  }

 private:
  std::uint64_t remainder_store_bits() const noexcept {
    const auto& p = params_;
    if (p.variant == SumVariant::kLargeEps)
      return ceil_log2_u128(static_cast<uint128>(2 * p.block_size) * p.blocks) +
             p.frac_bits;
    return ceil_log2(p.window) + p.frac_bits;
  }

  SumParams params_;
  PackedArray cells_;
  uint128 denominator_;    // blocks * 2^frac_bits
  uint128 block_raw_;      // one block's worth, window * 2^frac_bits
  uint128 remainder_raw_ = 0;
  std::uint64_t cell_total_ = 0;
  std::uint64_t offset_ = 0;
  std::uint64_t cursor_ = 0;
};

}  // namespace sws
