#include <doctest.h>

#include <cstdint>

#include "sws/bit_io.hpp"
#include "sws/streams.hpp"

using sws::BitReader;
using sws::BitWriter;
using sws::PackedArray;

TEST_CASE("bit writer packs little-endian, lsb first") {
  BitWriter w;
  w.push(0b101, 3);
  w.push(0b01, 2);
  w.push(0b11111, 5);
  // stream bits: 1,0,1, 1,0, 1,1,1,1,1 -> byte0 = 0b11101101, byte1 = 0b11
  REQUIRE(w.bit_count() == 10);
  REQUIRE(w.bytes().size() == 2);
  CHECK(w.bytes()[0] == 0b11101101);
  CHECK(w.bytes()[1] == 0b00000011);

  BitReader r(w.bytes());
  CHECK(r.read_u64(3) == 0b101);
  CHECK(r.read_u64(2) == 0b01);
  CHECK(r.read_u64(5) == 0b11111);
  CHECK(r.padding_clear());
}

TEST_CASE("bit round trips over random field layouts") {
  sws::Xorshift64Star rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    BitWriter w;
    std::vector<std::pair<sws::uint128, unsigned>> fields;
    int count = static_cast<int>(rng.next() % 8 + 1);
    for (int f = 0; f < count; ++f) {
      unsigned width = static_cast<unsigned>(rng.next() % 90 + 1);
      sws::uint128 value =
          (static_cast<sws::uint128>(rng.next()) << 64 | rng.next());
      if (width < 128) value &= (static_cast<sws::uint128>(1) << width) - 1;
      fields.emplace_back(value, width);
      w.push(value, width);
    }
    BitReader r(w.bytes());
    for (auto& [value, width] : fields) CHECK(r.read(width) == value);
    CHECK(r.padding_clear());
  }
}

TEST_CASE("bit reader refuses to run past the buffer") {
  BitWriter w;
  w.push(0x3, 2);
  BitReader r(w.bytes());
  r.read(2);
  CHECK_THROWS_AS(r.read(7), std::out_of_range);
}

TEST_CASE("packed array get/set across word boundaries") {
  PackedArray cells(100, 13);
  sws::Xorshift64Star rng(5);
  std::vector<std::uint64_t> mirror(100, 0);
  for (int step = 0; step < 2000; ++step) {
    std::size_t idx = rng.next() % 100;
    std::uint64_t value = rng.next() & 0x1FFF;
    cells.set(idx, value);
    mirror[idx] = value;
    std::size_t probe = rng.next() % 100;
    CHECK(cells.get(probe) == mirror[probe]);
  }
}

TEST_CASE("packed array rejects zero width") {
  CHECK_THROWS_AS(PackedArray(4, 0), std::invalid_argument);
  CHECK_THROWS_AS(PackedArray(4, 65), std::invalid_argument);
}
