#include <doctest.h>

#include <cstdint>
#include <vector>

#include "sws/count_sketch.hpp"
#include "sws/exact_window.hpp"
#include "sws/int128.hpp"
#include "sws/streams.hpp"

using sws::CountParams;
using sws::CountSketch;
using sws::Rational;

namespace {

// Brute-force reference for the divisor rounding.
std::uint64_t smallest_divisor_oracle(std::uint64_t n, std::uint64_t lo) {
  for (std::uint64_t d = lo; d <= n; ++d)
    if (n % d == 0) return d;
  return n;
}

std::uint64_t recount_marks(const CountSketch& sk) {
  std::uint64_t total = 0;
  for (std::uint64_t b = 0; b < sk.params().blocks; ++b)
    total += sk.mark(b) ? 1 : 0;
  return total;
}

void check_state_invariants(const CountSketch& sk) {
  const auto& p = sk.params();
  REQUIRE(sk.pending_ones() <= 2 * p.block_size - 1);
  // Right after a boundary the pending count fits in one block.
  if (sk.offset() == 0) REQUIRE(sk.pending_ones() <= p.block_size);
  REQUIRE(sk.offset() < p.block_size);
  REQUIRE(sk.oldest_index() < p.blocks);
  REQUIRE(sk.marked_total() == recount_marks(sk));
}

}  // namespace

TEST_CASE("derive picks the smallest divisor block count") {
  auto p = CountParams::derive(64, Rational(1, 8));
  CHECK(p.blocks == 4);
  CHECK(p.block_size == 16);

  p = CountParams::derive(4, Rational(1, 4));
  CHECK(p.blocks == 2);
  CHECK(p.block_size == 2);

  p = CountParams::derive(7, Rational(1, 4));
  CHECK(p.blocks == smallest_divisor_oracle(7, 2));
  CHECK(p.blocks == 7);
  CHECK(p.block_size == 1);

  CHECK_THROWS_AS(CountParams::derive(4, Rational(1, 16)), sws::RegimeError);
  CHECK_THROWS_AS(CountParams::derive(0, Rational(1, 4)),
                  std::invalid_argument);
  CHECK_THROWS_AS(CountParams::derive(8, Rational(3, 4)),
                  std::invalid_argument);
}

TEST_CASE("derive matches the divisor oracle on random inputs") {
  sws::Xorshift64Star rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    std::uint64_t window = rng.next() % 500 + 1;
    std::int64_t den = static_cast<std::int64_t>(rng.next() % 30 + 2);
    Rational epsilon(1, den);
    std::uint64_t min_blocks = static_cast<std::uint64_t>(
        (Rational(1) / (Rational(2) * epsilon)).floor());
    if (Rational(1) / (Rational(2) * epsilon) >
        Rational(static_cast<std::int64_t>(min_blocks)))
      ++min_blocks;
    if (min_blocks > window) {
      CHECK_THROWS_AS(CountParams::derive(window, epsilon), sws::RegimeError);
      continue;
    }
    auto p = CountParams::derive(window, epsilon);
    CHECK(p.blocks == smallest_divisor_oracle(window, min_blocks));
    CHECK(p.blocks * p.block_size == window);
  }
}

TEST_CASE("add follows the block pseudocode step by step") {
  CountSketch sk(CountParams::derive(4, Rational(1, 4)));  // k=2, s=2
  sk.add(1);
  CHECK(sk.pending_ones() == 1);
  CHECK(sk.offset() == 1);
  CHECK(sk.marked_total() == 0);

  sk.add(1);  // block boundary: pending crosses the threshold
  CHECK(sk.mark(0));
  CHECK(sk.pending_ones() == 0);
  CHECK(sk.marked_total() == 1);
  CHECK(sk.offset() == 0);
  CHECK(sk.oldest_index() == 1);
}

TEST_CASE("zero stream leaves all state at zero") {
  CountSketch sk(CountParams::derive(4, Rational(1, 4)));
  for (int i = 0; i < 8; ++i) {
    sk.add(0);
    CHECK(sk.pending_ones() == 0);
    CHECK(sk.marked_total() == 0);
  }
  CHECK(sk.oldest_index() == 0);  // cycled k twice
}

TEST_CASE("query formula on known streams") {
  CountSketch sk(CountParams::derive(4, Rational(1, 4)));
  CHECK(sk.query() == Rational(-1));  // -W/(2k) on the fresh sketch

  sk.add(1);
  sk.add(1);
  CHECK(sk.query() == Rational(1));  // exact 2, error exactly W*eps

  sk.add(1);
  sk.add(1);
  CHECK(sk.query() == Rational(3));  // exact 4
}

TEST_CASE("query yields half-integers for odd block sizes") {
  CountSketch sk(CountParams::derive(3, Rational(1, 2)));  // k=1, s=3
  CHECK(sk.query() == Rational(-3, 2));
}

TEST_CASE("rejects non-bit input") {
  CountSketch sk(CountParams::derive(4, Rational(1, 4)));
  CHECK_THROWS_AS(sk.add(2), std::invalid_argument);
}

TEST_CASE("error stays within W*eps against the oracle") {
  sws::Xorshift64Star seeds(97);
  for (std::uint64_t window : {4u, 8u, 30u, 64u, 126u}) {
    for (std::int64_t den : {2, 4, 8, 32}) {
      Rational epsilon(1, den);
      if (sws::ceil_div_u64(static_cast<std::uint64_t>(den), 2) > window)
        continue;
      Rational bound = Rational(static_cast<std::int64_t>(window)) * epsilon;
      for (Rational p : {Rational(1, 10), Rational(1, 2), Rational(9, 10)}) {
        CountSketch sk(CountParams::derive(window, epsilon));
        sws::ExactWindow oracle(window);
        auto stream = sws::gen_bernoulli(p, 3 * window, seeds.next());
        for (std::uint64_t bit : stream) {
          sk.add(bit);
          oracle.push(bit);
          Rational err =
              sk.query() - Rational(static_cast<sws::int128>(oracle.total()), 1);
          REQUIRE(err.abs() <= bound);
          check_state_invariants(sk);
        }
      }
    }
  }
}

TEST_CASE("conservation at the first k block boundaries") {
  // While no block has expired, committed blocks plus the pending counter
  // equal the total number of ones consumed.
  auto p = CountParams::derive(20, Rational(1, 8));  // k=5, s=4
  CountSketch sk(p);
  sws::Xorshift64Star rng(13);
  std::uint64_t ones = 0;
  for (std::uint64_t boundary = 0; boundary < p.blocks; ++boundary) {
    for (std::uint64_t j = 0; j < p.block_size; ++j) {
      std::uint64_t bit = rng.next() & 1;
      sk.add(bit);
      ones += bit;
    }
    CHECK(p.block_size * sk.marked_total() + sk.pending_ones() == ones);
  }
}

TEST_CASE("state bit accounting") {
  CountSketch small(CountParams::derive(4, Rational(1, 4)));
  CHECK(small.packed_bits() == 8);  // 2 + 2 + 1 + 1 + 2

  // Independent width sum: blocks + values(pending) + values(offset)
  // + values(cursor) + values(total).
  auto width = [](std::uint64_t values) { return sws::ceil_log2(values); };
  auto p = CountParams::derive(1024, Rational(1, 64));
  CHECK(p.blocks == 32);
  CHECK(p.block_size == 32);
  CountSketch sk(p);
  CHECK(sk.packed_bits() == p.blocks + width(2 * p.block_size) +
                                width(p.block_size) + width(p.blocks) +
                                width(p.blocks + 1));
  CHECK(sk.packed_bits() == 54);

  // Degenerate unit blocks: the offset field carries no information.
  auto unit = CountParams::derive(7, Rational(1, 4));
  CHECK(CountSketch(unit).packed_bits() ==
        7 + 1 + 0 + sws::ceil_log2(7) + sws::ceil_log2(8));
}

TEST_CASE("serialization round trips at exactly packed_bits bits") {
  sws::Xorshift64Star rng(19);
  for (std::uint64_t window : {4u, 7u, 24u, 64u}) {
    Rational epsilon(1, 8);
    if (window < 4) continue;
    auto params = CountParams::derive(window, epsilon);
    CountSketch sk(params);
    auto stream = sws::gen_bernoulli(Rational(1, 3), 2 * window, rng.next());
    for (std::uint64_t bit : stream) sk.add(bit);
    auto bytes = sk.serialize();
    CHECK(bytes.size() == (sk.packed_bits() + 7) / 8);
    CountSketch restored = CountSketch::deserialize(params, bytes);
    CHECK(restored.pending_ones() == sk.pending_ones());
    CHECK(restored.offset() == sk.offset());
    CHECK(restored.oldest_index() == sk.oldest_index());
    CHECK(restored.marked_total() == sk.marked_total());
    CHECK(restored.query() == sk.query());
    // The restored sketch keeps evolving identically.
    for (int i = 0; i < 16; ++i) {
      std::uint64_t bit = rng.next() & 1;
      sk.add(bit);
      restored.add(bit);
    }
    CHECK(restored.query() == sk.query());
  }
}

TEST_CASE("corrupt payloads are rejected") {
  auto params = CountParams::derive(8, Rational(1, 4));
  CountSketch sk(params);
  for (int i = 0; i < 5; ++i) sk.add(1);
  auto bytes = sk.serialize();
  auto truncated = bytes;
  truncated.pop_back();
  CHECK_THROWS_AS(CountSketch::deserialize(params, truncated),
                  std::exception);
  auto padded = bytes;
  padded.push_back(0xFF);
  CHECK_THROWS_AS(CountSketch::deserialize(params, padded),
                  std::invalid_argument);
}

TEST_CASE("replaying a stream is bit-identical") {
  auto params = CountParams::derive(30, Rational(1, 6));
  auto stream = sws::gen_bernoulli(Rational(2, 5), 120, 77);
  CountSketch a(params), b(params);
  for (std::uint64_t bit : stream) a.add(bit);
  for (std::uint64_t bit : stream) b.add(bit);
  CHECK(a.serialize() == b.serialize());
}
