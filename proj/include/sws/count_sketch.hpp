#pragma once

#include <cassert>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "sws/bit_io.hpp"
#include "sws/errors.hpp"
#include "sws/int128.hpp"
#include "sws/rational.hpp"
#include "sws/steps.hpp"

namespace sws {

// Validated configuration for the sliding-window counting sketch: a window of
// `window` bits split into `blocks` blocks of `block_size` positions each.
struct CountParams {
  std::uint64_t window = 0;      // W
  Rational epsilon;              // additive error is window * epsilon
  std::uint64_t blocks = 0;      // k, a divisor of window
  std::uint64_t block_size = 0;  // window / blocks

  // Picks the smallest divisor of `window` that is at least ceil(1/(2 eps)).
  // Rounding the block count up to a divisor only tightens the half-block
  // bias term, so the error guarantee is preserved.
  static CountParams derive(std::uint64_t window, const Rational& epsilon) {
    if (window == 0) throw std::invalid_argument("window must be >= 1");
    if (epsilon.sign() <= 0 || epsilon > Rational(1, 2))
      throw std::invalid_argument("epsilon must be in (0, 1/2]");
    // ceil(1 / (2 eps)) = ceil(den / (2 num)), exactly.
    uint128 num = static_cast<uint128>(epsilon.numerator());
    uint128 den = static_cast<uint128>(epsilon.denominator());
    uint128 min_blocks = ceil_div_u128(den, 2 * num);
    if (min_blocks > window)
      throw RegimeError(
          "epsilon too small for block algorithm; use exact storage or the "
          "summing sketch with range 1");
    std::uint64_t k = smallest_divisor_at_least(
        window, static_cast<std::uint64_t>(min_blocks));
    return CountParams{window, epsilon, k, window / k};
  }

  static std::uint64_t smallest_divisor_at_least(std::uint64_t n,
                                                 std::uint64_t lo) {
    std::uint64_t best = n;
    for (std::uint64_t d = 1; d * d <= n; ++d) {
      if (n % d != 0) continue;
      if (d >= lo && d < best) best = d;
      std::uint64_t q = n / d;
      if (q >= lo && q < best) best = q;
    }
    return best;
  }

  bool operator==(const CountParams&) const = default;
};

// Additive-error counter for the number of ones among the last W bits of a
// binary stream. Ones not yet committed to a block are carried in `pending_`
// and propagated across block boundaries, so per-block rounding errors do
// not accumulate; every add and query is constant time. A fresh sketch
// behaves as if W zeros preceded the stream.
class CountSketch {
 public:
  explicit CountSketch(CountParams params)
      : params_(std::move(params)), marks_(params_.blocks, 1) {}

  const CountParams& params() const noexcept { return params_; }

  void add(std::uint64_t bit) {
    if (bit > 1) throw std::invalid_argument("count stream values must be bits");
    detail::step();
    if (offset_ == params_.block_size - 1) {
      marked_total_ -= marks_.get(oldest_);
      bool mark = pending_ + bit >= params_.block_size;
      pending_ = mark ? pending_ + bit - params_.block_size : pending_ + bit;
      marks_.set(oldest_, mark);
      marked_total_ += mark;
      detail::step();
      offset_ = 0;
      oldest_ = oldest_ + 1 == params_.blocks ? 0 : oldest_ + 1;
      detail::step();
    } else {
      pending_ += bit;
      ++offset_;
      detail::step();
    }
  }

  // block_size * marked_total + pending - block_size/2 - offset * oldest mark,
  // exact; may be negative or exceed W (clamping is left to the caller).
  Rational query() const {
    detail::step();
    int128 twice =
        2 * (static_cast<int128>(params_.block_size) * marked_total_ +
             pending_) -
        static_cast<int128>(params_.block_size) -
        2 * static_cast<int128>(offset_) * marks_.get(oldest_);
    return Rational(twice, 2);
  }

  // State readouts, used by tests and reports.
  std::uint64_t pending_ones() const noexcept { return pending_; }
  std::uint64_t marked_total() const noexcept { return marked_total_; }
  std::uint64_t offset() const noexcept { return offset_; }
  std::uint64_t oldest_index() const noexcept { return oldest_; }
  bool mark(std::uint64_t block) const { return marks_.get(block) != 0; }

  // Bits of state with every field sized to its invariant range: the mark
  // array (k), pending ones in [0, 2s-1], offset in [0, s-1], the block
  // cursor in [0, k-1] and the mark total in [0, k].
  std::uint64_t packed_bits() const noexcept {
    const auto& p = params_;
    return p.blocks + ceil_log2(2 * p.block_size) + ceil_log2(p.block_size) +
           ceil_log2(p.blocks) + ceil_log2(p.blocks + 1);
  }

  // Little-endian bit packing in field order (marks, pending, offset, cursor,
  // total); the payload is exactly packed_bits() bits plus zero padding to a
  // byte boundary. Params travel separately.
  std::vector<std::uint8_t> serialize() const {
    BitWriter out;
    for (std::uint64_t b = 0; b < params_.blocks; ++b)
      out.push(marks_.get(b), 1);
    out.push(pending_, ceil_log2(2 * params_.block_size));
    out.push(offset_, ceil_log2(params_.block_size));
    out.push(oldest_, ceil_log2(params_.blocks));
    out.push(marked_total_, ceil_log2(params_.blocks + 1));
    assert(out.bit_count() == packed_bits());
    return std::move(out).take();
  }

  static CountSketch deserialize(CountParams params,
                                 std::span<const std::uint8_t> bytes) {
    CountSketch sk(std::move(params));
    const auto& p = sk.params_;
    BitReader in(bytes);
    std::uint64_t total = 0;
    for (std::uint64_t b = 0; b < p.blocks; ++b) {
      std::uint64_t bit = in.read_u64(1);
      sk.marks_.set(b, bit);
      total += bit;
    }
    sk.pending_ = in.read_u64(ceil_log2(2 * p.block_size));
    sk.offset_ = in.read_u64(ceil_log2(p.block_size));
    sk.oldest_ = in.read_u64(ceil_log2(p.blocks));
    sk.marked_total_ = in.read_u64(ceil_log2(p.blocks + 1));
    if (bytes.size() != (sk.packed_bits() + 7) / 8 || !in.padding_clear())
      throw std::invalid_argument("count sketch payload corrupt");
    if (sk.marked_total_ != total || sk.pending_ > 2 * p.block_size - 1 ||
        sk.offset_ >= p.block_size || sk.oldest_ >= p.blocks)
      throw std::invalid_argument("count sketch payload violates invariants");
    return sk;
  }

 private:
  CountParams params_;
  PackedArray marks_;             // one bit per block, cyclic
  std::uint64_t pending_ = 0;     // ones not yet committed to a block
  std::uint64_t marked_total_ = 0;
  std::uint64_t offset_ = 0;      // position within the current block
  std::uint64_t oldest_ = 0;      // index of the oldest block mark
};

}  // namespace sws
