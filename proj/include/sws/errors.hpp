#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sws {

// Parameter combination outside an algorithm's operating regime, e.g. an
// epsilon so small that only exact storage can meet the error bound.
class RegimeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed stream text; carries the 1-based line number of the offending line.
class StreamParseError : public std::runtime_error {
 public:
  StreamParseError(const std::string& message, std::size_t line)
      : std::runtime_error(
            line == 0 ? message
                      : message + " (line " + std::to_string(line) + ")"),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A stream value outside the configured range [0, R]; carries the 0-based
// position of the offending element.
class StreamRangeError : public std::runtime_error {
 public:
  StreamRangeError(const std::string& message, std::size_t position)
      : std::runtime_error(message + " (position " + std::to_string(position) +
                           ")"),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace sws
