#pragma once

#include <cstdint>
#include <cstdio>
#include <span>
#include <string>

#include <json.hpp>

#include "sws/bounds.hpp"
#include "sws/count_sketch.hpp"
#include "sws/exact_window.hpp"
#include "sws/rational.hpp"
#include "sws/sum_sketch.hpp"

namespace sws {

// Per-run error statistics from running a sketch against the exact oracle.
// `violations` counts queries whose absolute error exceeded the bound; a
// conforming run always reports zero.
struct ErrorReport {
  std::uint64_t steps = 0;
  std::uint64_t queries = 0;
  Rational max_abs_error;
  Rational mean_error;  // signed, so the half-block bias is visible
  Rational bound;       // W*eps for counting, R*W*eps for summing
  std::uint64_t violations = 0;
};

struct EvalOptions {
  std::uint64_t query_every = 1;
  // Clamp estimates into [0, W*R]; the truth lies there, so clamping can only
  // reduce error.
  bool clamp = false;
};

namespace detail {

inline std::uint64_t sketch_range(const CountSketch&) { return 1; }
inline std::uint64_t sketch_range(const SumSketch& sk) {
  return sk.params().range;
}

inline Rational error_bound(const CountSketch& sk) {
  return Rational(static_cast<std::int64_t>(sk.params().window)) *
         sk.params().epsilon;
}
inline Rational error_bound(const SumSketch& sk) {
  return Rational(static_cast<std::int64_t>(sk.params().window)) *
         Rational(static_cast<std::int64_t>(sk.params().range)) *
         sk.params().epsilon;
}

}  // namespace detail

// Runs the sketch and the exact window in lockstep, comparing estimates in
// exact rational arithmetic every `query_every` elements.
template <typename Sketch>
ErrorReport evaluate(Sketch& sketch, std::span<const std::uint64_t> stream,
                     EvalOptions options = {}) {
  if (options.query_every == 0)
    throw std::invalid_argument("query_every must be >= 1");
  const std::uint64_t window = sketch.params().window;
  const std::uint64_t range = detail::sketch_range(sketch);
  ExactWindow oracle(window);
  ErrorReport report;
  report.bound = detail::error_bound(sketch);
  const Rational ceiling(
      checked_mul(static_cast<int128>(window), static_cast<int128>(range)),
      1);
  Rational error_sum;
  for (std::size_t pos = 0; pos < stream.size(); ++pos) {
    oracle.push(stream[pos]);
    sketch.add(stream[pos]);
    ++report.steps;
    if (report.steps % options.query_every != 0) continue;
    Rational estimate = sketch.query();
    if (options.clamp) {
      if (estimate.sign() < 0) estimate = Rational(0);
      if (estimate > ceiling) estimate = ceiling;
    }
    Rational exact = Rational(static_cast<int128>(oracle.total()), 1);
    Rational error = estimate - exact;
    ++report.queries;
    error_sum += error;
    Rational magnitude = error.abs();
    if (magnitude > report.max_abs_error) report.max_abs_error = magnitude;
    if (magnitude > report.bound) ++report.violations;
  }
  if (report.queries > 0)
    report.mean_error =
        error_sum / Rational(static_cast<std::int64_t>(report.queries));
  return report;
}

// State-size accounting next to the relevant formulas. `ratio` can fall on
// either side of 1 at tiny windows because of ceiling terms; only the
// acceptance-grid bounds are asserted anywhere.
struct MemoryReport {
  std::uint64_t actual_state_bits = 0;
  std::uint64_t denominator_overhead_bits = 0;
  long double theoretical_upper_bits = 0;
  long double lower_bound_bits = 0;
  long double ratio = 0;  // actual / lower
};

inline MemoryReport memory_report(const CountSketch& sketch) {
  const auto& p = sketch.params();
  MemoryReport r;
  r.actual_state_bits = sketch.packed_bits();
  r.denominator_overhead_bits = 0;
  r.theoretical_upper_bits = bounds::count_upper_theory(p.window, p.epsilon);
  Rational capped =
      p.epsilon > Rational(1, 4) ? Rational(1, 4) : p.epsilon;
  r.lower_bound_bits =
      p.window < 2
          ? 1.0L
          : static_cast<long double>(bounds::count_lower_bound(p.window, capped));
  r.ratio = static_cast<long double>(r.actual_state_bits) / r.lower_bound_bits;
  return r;
}

inline MemoryReport memory_report(const SumSketch& sketch) {
  const auto& p = sketch.params();
  MemoryReport r;
  r.actual_state_bits = sketch.packed_bits();
  r.denominator_overhead_bits = sketch.denominator_overhead_bits();
  if (p.variant == SumVariant::kLargeEps) {
    Rational half_inverse = Rational(1) / (Rational(2) * p.epsilon);
    r.theoretical_upper_bits =
        half_inverse.to_long_double() +
        2.0L * std::log2(static_cast<long double>(p.window));
  } else {
    Rational inner =
        Rational(1) / (Rational(2) *
                       Rational(static_cast<std::int64_t>(p.window)) *
                       p.epsilon) +
        Rational(1);
    r.theoretical_upper_bits = static_cast<long double>(p.window) *
                               std::log2(inner.to_long_double());
  }
  r.lower_bound_bits = bounds::sum_lower_bound(p.window, p.range, p.epsilon);
  r.ratio = r.lower_bound_bits > 0
                ? static_cast<long double>(r.actual_state_bits) /
                      r.lower_bound_bits
                : 0.0L;
  return r;
}

// --- report rendering -------------------------------------------------------

inline std::string format_long_double(long double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15Lg", value);
  return buf;
}

inline void append_rational(nlohmann::ordered_json& j, const std::string& key,
                            const Rational& value) {
  j[key] = value.to_decimal_string(15);
  j[key + "_num"] = value.numerator_string();
  j[key + "_den"] = value.denominator_string();
}

inline nlohmann::ordered_json to_json(const ErrorReport& r) {
  nlohmann::ordered_json j;
  j["steps"] = r.steps;
  j["queries"] = r.queries;
  j["violations"] = r.violations;
  append_rational(j, "bound", r.bound);
  append_rational(j, "max_abs_error", r.max_abs_error);
  append_rational(j, "mean_error", r.mean_error);
  return j;
}

inline nlohmann::ordered_json to_json(const MemoryReport& r) {
  nlohmann::ordered_json j;
  j["actual_state_bits"] = r.actual_state_bits;
  j["denominator_overhead_bits"] = r.denominator_overhead_bits;
  j["theoretical_upper_bits"] = format_long_double(r.theoretical_upper_bits);
  j["lower_bound_bits"] = format_long_double(r.lower_bound_bits);
  j["ratio"] = format_long_double(r.ratio);
  return j;
}

}  // namespace sws
