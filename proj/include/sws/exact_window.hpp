#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "sws/int128.hpp"

namespace sws {

// Exact sliding-window aggregate: a ring buffer of the last W values plus a
// running sum. Deliberately the Theta(W log R) naive baseline; it is the
// ground truth every sketch is tested against. Zero-initialized, so a fresh
// window reads as W leading zeros.
class ExactWindow {
 public:
  explicit ExactWindow(std::uint64_t window) : values_(window, 0) {
    if (window == 0) throw std::invalid_argument("window must be >= 1");
  }

  std::uint64_t window() const noexcept { return values_.size(); }

  void push(std::uint64_t value) {
    running_sum_ -= values_[head_];
    running_sum_ += value;
    values_[head_] = value;
    head_ = head_ + 1 == values_.size() ? 0 : head_ + 1;
  }

  uint128 total() const noexcept { return running_sum_; }

  // Full-scan recomputation, used to cross-check the incremental sum.
  uint128 total_by_scan() const noexcept {
    uint128 sum = 0;
    for (std::uint64_t v : values_) sum += v;
    return sum;
  }

 private:
  std::vector<std::uint64_t> values_;
  std::size_t head_ = 0;
  uint128 running_sum_ = 0;
};

}  // namespace sws
