#pragma once

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "sws/int128.hpp"

namespace sws {

// Append-only little-endian bit stream: bit n of the stream is bit n%8 of
// byte n/8, and values are emitted least-significant bit first.
class BitWriter {
 public:
  void push(uint128 value, unsigned width) {
    assert(width <= 128);
    assert(width == 128 || (value >> width) == 0);
    for (unsigned b = 0; b < width; ++b) {
      if (bit_count_ % 8 == 0) bytes_.push_back(0);
      if ((value >> b) & 1)
        bytes_.back() |= static_cast<std::uint8_t>(1u << (bit_count_ % 8));
      ++bit_count_;
    }
  }

  std::size_t bit_count() const noexcept { return bit_count_; }
  const std::vector<std::uint8_t>& bytes() const noexcept { return bytes_; }
  std::vector<std::uint8_t> take() && { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
  std::size_t bit_count_ = 0;
};

class BitReader {
 public:
  explicit BitReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  uint128 read(unsigned width) {
    assert(width <= 128);
    uint128 value = 0;
    for (unsigned b = 0; b < width; ++b) {
      if (pos_ / 8 >= bytes_.size())
        throw std::out_of_range("bit stream exhausted");
      if ((bytes_[pos_ / 8] >> (pos_ % 8)) & 1)
        value |= static_cast<uint128>(1) << b;
      ++pos_;
    }
    return value;
  }

  std::uint64_t read_u64(unsigned width) {
    assert(width <= 64);
    return static_cast<std::uint64_t>(read(width));
  }

  std::size_t position() const noexcept { return pos_; }

  // Remaining bits up to the byte boundary must be zero padding.
  bool padding_clear() const {
    for (std::size_t p = pos_; p < bytes_.size() * 8; ++p)
      if ((bytes_[p / 8] >> (p % 8)) & 1) return false;
    return true;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

// Fixed-width unsigned cells packed back to back in 64-bit words.
class PackedArray {
 public:
  PackedArray() = default;

  PackedArray(std::size_t size, unsigned width) : size_(size), width_(width) {
    if (width_ == 0 || width_ > 64)
      throw std::invalid_argument("cell width must be in [1, 64]");
    words_.assign((size_ * width_ + 63) / 64, 0);
  }

  std::size_t size() const noexcept { return size_; }
  unsigned width() const noexcept { return width_; }

  std::uint64_t get(std::size_t index) const {
    assert(index < size_);
    std::size_t bit = index * width_;
    std::size_t word = bit / 64;
    unsigned off = static_cast<unsigned>(bit % 64);
    std::uint64_t value = words_[word] >> off;
    if (off + width_ > 64) value |= words_[word + 1] << (64 - off);
    return value & mask();
  }

  void set(std::size_t index, std::uint64_t value) {
    assert(index < size_);
    assert(width_ == 64 || value <= mask());
    std::size_t bit = index * width_;
    std::size_t word = bit / 64;
    unsigned off = static_cast<unsigned>(bit % 64);
    words_[word] = (words_[word] & ~(mask() << off)) | (value << off);
    if (off + width_ > 64) {
      unsigned high = off + width_ - 64;
      std::uint64_t high_mask = (std::uint64_t(1) << high) - 1;
      words_[word + 1] =
          (words_[word + 1] & ~high_mask) | (value >> (64 - off));
    }
  }

  bool operator==(const PackedArray&) const = default;

 private:
  std::uint64_t mask() const noexcept {
    return width_ == 64 ? ~std::uint64_t(0)
                        : (std::uint64_t(1) << width_) - 1;
  }

  std::vector<std::uint64_t> words_;
  std::size_t size_ = 0;
  unsigned width_ = 1;
};

}  // namespace sws
