#pragma once

#include <cstdint>
#include <fstream>
#include <istream>
#include <string>
#include <variant>
#include <vector>

#include "sws/errors.hpp"
#include "sws/int128.hpp"
#include "sws/rational.hpp"

namespace sws {

// xorshift64* generator; seedable and bit-stable across platforms so that
// documented runs replay identically. A zero seed is remapped to a fixed
// nonzero constant (the all-zero state is a fixed point of xorshift).
class Xorshift64Star {
 public:
  explicit Xorshift64Star(std::uint64_t seed)
      : state_(seed != 0 ? seed : 0x9E3779B97F4A7C15ull) {}

  std::uint64_t next() {
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * 0x2545F4914F6CDD1Dull;
  }

 private:
  std::uint64_t state_;
};

inline std::vector<std::uint64_t> gen_constant(std::uint64_t value,
                                               std::size_t count) {
  return std::vector<std::uint64_t>(count, value);
}

// Bernoulli(p) bits; p is exact, the comparison threshold floor(p * 2^64)
// biases each draw by less than 2^-64.
inline std::vector<std::uint64_t> gen_bernoulli(const Rational& p,
                                                std::size_t count,
                                                std::uint64_t seed) {
  if (p.sign() < 0 || p > Rational(1))
    throw std::invalid_argument("bernoulli p must be in [0, 1]");
  Xorshift64Star rng(seed);
  std::vector<std::uint64_t> out(count);
  if (p == Rational(1)) {
    for (auto& v : out) {
      rng.next();
      v = 1;
    }
    return out;
  }
  uint128 threshold = (static_cast<uint128>(p.numerator()) << 64) /
                      static_cast<uint128>(p.denominator());
  for (auto& v : out)
    v = static_cast<uint128>(rng.next()) < threshold ? 1 : 0;
  return out;
}

// Uniform integers in [0, range], rejection-sampled so every value is equally
// likely.
inline std::vector<std::uint64_t> gen_uniform(std::uint64_t range,
                                              std::size_t count,
                                              std::uint64_t seed) {
  Xorshift64Star rng(seed);
  std::vector<std::uint64_t> out(count);
  if (range == 0) return out;
  std::uint64_t bound = range + 1;
  if (bound == 0) {  // range == 2^64 - 1: every 64-bit value is in range
    for (auto& v : out) v = rng.next();
    return out;
  }
  std::uint64_t reject_below = (0 - bound) % bound;
  for (auto& v : out) {
    std::uint64_t u = rng.next();
    while (u < reject_below) u = rng.next();
    v = u % bound;
  }
  return out;
}

// Parameters of the counting adversary language: words are `pattern_length`
// blocks of `block_size` identical bits.
struct BlockLanguageParams {
  std::uint64_t block_size = 0;      // floor(2 W eps + 1)
  std::uint64_t pattern_length = 0;  // floor(W / block_size)
};

inline BlockLanguageParams block_language_params(std::uint64_t window,
                                                 const Rational& epsilon) {
  if (epsilon.sign() <= 0) throw std::invalid_argument("epsilon must be > 0");
  uint128 num = static_cast<uint128>(epsilon.numerator());
  uint128 den = static_cast<uint128>(epsilon.denominator());
  uint128 block = (checked_mul_u(2 * num, window) + den) / den;
  std::uint64_t bs = static_cast<std::uint64_t>(block);
  return BlockLanguageParams{bs, window / bs};
}

// Expands a pattern of block marks into the corresponding word: one run of
// identical bits per pattern entry.
inline std::vector<std::uint64_t> gen_block_language(
    std::uint64_t window, const Rational& epsilon,
    const std::vector<std::uint64_t>& pattern) {
  BlockLanguageParams lp = block_language_params(window, epsilon);
  if (pattern.size() != lp.pattern_length)
    throw std::invalid_argument("pattern length must equal floor(W / floor(2We+1))");
  std::vector<std::uint64_t> out;
  out.reserve(pattern.size() * lp.block_size);
  for (std::uint64_t bit : pattern) {
    if (bit > 1) throw std::invalid_argument("pattern entries must be bits");
    out.insert(out.end(), lp.block_size, bit);
  }
  return out;
}

// Parameters of the summing adversary language: an alphabet of
// `alphabet_size` multiples of `letter_step`.
struct SumLanguageParams {
  std::uint64_t letter_step = 0;    // floor(2 R W eps + 1)
  std::uint64_t alphabet_size = 0;  // floor(1 / (2 W eps + 1/R))
};

inline SumLanguageParams sum_language_params(std::uint64_t window,
                                             std::uint64_t range,
                                             const Rational& epsilon) {
  if (range == 0) throw std::invalid_argument("range must be >= 1");
  if (epsilon.sign() <= 0) throw std::invalid_argument("epsilon must be > 0");
  uint128 num = static_cast<uint128>(epsilon.numerator());
  uint128 den = static_cast<uint128>(epsilon.denominator());
  uint128 step =
      (checked_mul_u(checked_mul_u(2 * num, window), range) + den) / den;
  // 1/(2 W eps + 1/R) = R den / (2 W num R + den)
  uint128 alphabet = checked_mul_u(den, range) /
                     (checked_mul_u(checked_mul_u(2 * num, window), range) + den);
  return SumLanguageParams{static_cast<std::uint64_t>(step),
                           static_cast<std::uint64_t>(alphabet)};
}

// Emits letter_step * letters[j] for a window-length word over the alphabet.
inline std::vector<std::uint64_t> gen_sum_language(
    std::uint64_t window, std::uint64_t range, const Rational& epsilon,
    const std::vector<std::uint64_t>& letters) {
  SumLanguageParams lp = sum_language_params(window, range, epsilon);
  if (letters.size() != window)
    throw std::invalid_argument("letter sequence must have window length");
  std::vector<std::uint64_t> out;
  out.reserve(letters.size());
  for (std::uint64_t n : letters) {
    if (n >= lp.alphabet_size)
      throw std::out_of_range("letter index outside the alphabet");
    std::uint64_t value = n * lp.letter_step;
    if (value > range) throw std::out_of_range("letter value exceeds range");
    out.push_back(value);
  }
  return out;
}

// One non-negative decimal integer per line; blank lines are skipped. Range
// validation happens at consumption time, when R is known.
inline std::vector<std::uint64_t> parse_stream(std::istream& in) {
  std::vector<std::uint64_t> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    std::size_t end = line.find_last_not_of(" \t\r");
    std::uint64_t value = 0;
    bool any = false;
    for (std::size_t i = begin; i <= end; ++i) {
      char c = line[i];
      if (c < '0' || c > '9')
        throw StreamParseError("expected a non-negative integer", line_no);
      if (value > (UINT64_MAX - static_cast<std::uint64_t>(c - '0')) / 10)
        throw StreamParseError("value does not fit in 64 bits", line_no);
      value = value * 10 + static_cast<std::uint64_t>(c - '0');
      any = true;
    }
    if (!any) throw StreamParseError("expected a non-negative integer", line_no);
    out.push_back(value);
  }
  return out;
}

inline std::vector<std::uint64_t> load_stream(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open stream file: " + path);
  return parse_stream(in);
}

// Stream kinds for the declarative description below; separate types so that
// a std::variant can dispatch on them.
struct BernoulliKind {
  Rational p;
  std::uint64_t seed = 1;
};
struct UniformKind {
  std::uint64_t seed = 1;
};
struct ConstantKind {
  std::uint64_t value = 0;
};
struct BlocksKind {
  std::vector<std::uint64_t> pattern;
};
struct SumLanguageKind {
  std::vector<std::uint64_t> letters;
};
struct FileKind {
  std::string path;
};

// Declarative stream description, mirroring what the CLI can produce.
struct StreamSpec {
  using Bernoulli = BernoulliKind;
  using Uniform = UniformKind;
  using Constant = ConstantKind;
  using Blocks = BlocksKind;
  using SumLanguage = SumLanguageKind;
  using File = FileKind;

  std::variant<Bernoulli, Uniform, Constant, Blocks, SumLanguage, File> kind;
  std::uint64_t length = 0;  // ignored for Blocks / SumLanguage / File
  std::uint64_t window = 0;  // adversarial kinds only
  std::uint64_t range = 1;
  Rational epsilon;

  std::vector<std::uint64_t> generate() const {
    if (auto* b = std::get_if<Bernoulli>(&kind))
      return gen_bernoulli(b->p, length, b->seed);
    if (auto* u = std::get_if<Uniform>(&kind))
      return gen_uniform(range, length, u->seed);
    if (auto* c = std::get_if<Constant>(&kind))
      return gen_constant(c->value, length);
    if (auto* bl = std::get_if<Blocks>(&kind))
      return gen_block_language(window, epsilon, bl->pattern);
    if (auto* sl = std::get_if<SumLanguage>(&kind))
      return gen_sum_language(window, range, epsilon, sl->letters);
    return load_stream(std::get<File>(kind).path);
  }
};

}  // namespace sws
