#pragma once

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sws/bounds.hpp"
#include "sws/count_sketch.hpp"
#include "sws/harness.hpp"
#include "sws/streams.hpp"
#include "sws/sum_sketch.hpp"

namespace sws::cli {

// Exit codes: 0 success, 2 usage error, 3 parameter-regime error,
// 4 input parse / range error.
enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kRegime = 3,
  kInput = 4,
};

struct CommonOptions {
  std::uint64_t window = 0;
  std::string epsilon_text;
  std::uint64_t range = 1;
  std::string input = "-";
  std::uint64_t query_every = 1;
  bool clamp = false;
  std::string report = "json";
};

struct GenOptions {
  std::string kind;
  std::uint64_t window = 0;
  std::string epsilon_text;
  std::uint64_t range = 1;
  std::string p_text = "1/2";
  std::uint64_t seed = 1;
  std::uint64_t length = 0;
  std::string pattern;
};

namespace detail {

inline std::vector<std::uint64_t> read_stream(const std::string& input,
                                              std::istream& stdin_stream) {
  if (input == "-") return parse_stream(stdin_stream);
  std::ifstream file(input);
  if (!file)
    throw StreamParseError("cannot open input file '" + input + "'", 0);
  return parse_stream(file);
}

inline void check_range(const std::vector<std::uint64_t>& stream,
                        std::uint64_t range) {
  for (std::size_t i = 0; i < stream.size(); ++i)
    if (stream[i] > range)
      throw StreamRangeError("stream value " + std::to_string(stream[i]) +
                                 " exceeds range " + std::to_string(range),
                             i);
}

inline void print_report(const nlohmann::ordered_json& j,
                         const std::string& format, std::ostream& out) {
  if (format == "json") {
    out << j.dump() << "\n";
    return;
  }
  for (const auto& [key, value] : j.items()) {
    if (value.is_string())
      out << key << " " << value.get<std::string>() << "\n";
    else
      out << key << " " << value.dump() << "\n";
  }
}

inline std::vector<std::uint64_t> parse_bit_pattern(const std::string& text) {
  std::vector<std::uint64_t> bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1')
      throw std::invalid_argument("block pattern must be a string of 0/1");
    bits.push_back(c == '1' ? 1 : 0);
  }
  return bits;
}

inline std::vector<std::uint64_t> parse_index_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoull(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad letter index '" + item + "'");
    }
  }
  return out;
}

inline void append_params(nlohmann::ordered_json& j, const CountSketch& s) {
  const auto& p = s.params();
  j["window"] = p.window;
  j["epsilon"] =
      p.epsilon.numerator_string() + "/" + p.epsilon.denominator_string();
  j["blocks"] = p.blocks;
  j["block_size"] = p.block_size;
}

inline void append_params(nlohmann::ordered_json& j, const SumSketch& s) {
  const auto& p = s.params();
  j["window"] = p.window;
  j["epsilon"] =
      p.epsilon.numerator_string() + "/" + p.epsilon.denominator_string();
  j["range"] = p.range;
  j["variant"] =
      p.variant == SumVariant::kLargeEps ? "large_eps" : "small_eps";
  j["frac_bits"] = p.frac_bits;
  j["blocks"] = p.blocks;
  j["block_size"] = p.block_size;
}

template <typename Sketch>
int run_evaluation(Sketch& sketch, const CommonOptions& opts,
                   std::istream& in, std::ostream& out) {
  std::vector<std::uint64_t> stream = read_stream(opts.input, in);
  check_range(stream, sws::detail::sketch_range(sketch));
  ErrorReport errors =
      evaluate(sketch, stream, EvalOptions{opts.query_every, opts.clamp});
  MemoryReport memory = memory_report(sketch);
  nlohmann::ordered_json j;
  append_params(j, sketch);
  j.update(to_json(errors));
  j.update(to_json(memory));
  print_report(j, opts.report, out);
  return kOk;
}

inline int run_count(const CommonOptions& opts, std::istream& in,
                     std::ostream& out) {
  CountSketch sketch(
      CountParams::derive(opts.window, parse_rational(opts.epsilon_text)));
  return run_evaluation(sketch, opts, in, out);
}

inline int run_sum(const CommonOptions& opts, std::istream& in,
                   std::ostream& out) {
  SumSketch sketch(SumParams::derive(opts.window, opts.range,
                                     parse_rational(opts.epsilon_text)));
  return run_evaluation(sketch, opts, in, out);
}

inline int run_bounds(const CommonOptions& opts,
                      std::optional<std::uint64_t> range, std::ostream& out) {
  Rational epsilon = parse_rational(opts.epsilon_text);
  nlohmann::ordered_json j;
  j["window"] = opts.window;
  j["epsilon"] =
      epsilon.numerator_string() + "/" + epsilon.denominator_string();
  j["count_upper_theory_bits"] =
      format_long_double(bounds::count_upper_theory(opts.window, epsilon));
  if (epsilon <= Rational(1, 4) && opts.window >= 2) {
    j["count_lower_bound_bits"] = bounds::count_lower_bound(opts.window, epsilon);
    j["count_lower_bound_blocks_bits"] =
        bounds::count_lower_bound_blocks(opts.window, epsilon);
  }
  if (opts.window >= 2) {
    std::uint64_t r = range.value_or(1);
    j["sum_lower_bound_bits"] = format_long_double(
        bounds::sum_lower_bound(opts.window, r, epsilon));
  }
  Rational small_limit =
      Rational(1) / Rational(static_cast<std::int64_t>(2) *
                             static_cast<std::int64_t>(opts.window));
  if (epsilon <= small_limit)
    j["succinct_bound_bits"] =
        format_long_double(bounds::succinct_bound(opts.window, epsilon));
  print_report(j, opts.report, out);
  return kOk;
}

inline int run_gen(const GenOptions& opts, std::ostream& out) {
  std::vector<std::uint64_t> stream;
  if (opts.kind == "bernoulli" || opts.kind == "uniform") {
    if (opts.length == 0)
      throw std::invalid_argument("--length is required for " + opts.kind);
  } else if (opts.window == 0 || opts.epsilon_text.empty()) {
    throw std::invalid_argument("--window and --epsilon are required for " +
                                opts.kind);
  }
  if (opts.kind == "bernoulli") {
    stream = gen_bernoulli(parse_rational(opts.p_text), opts.length, opts.seed);
  } else if (opts.kind == "uniform") {
    stream = gen_uniform(opts.range, opts.length, opts.seed);
  } else if (opts.kind == "blocks") {
    Rational epsilon = parse_rational(opts.epsilon_text);
    std::vector<std::uint64_t> pattern;
    if (!opts.pattern.empty()) {
      pattern = parse_bit_pattern(opts.pattern);
    } else {
      BlockLanguageParams lp = block_language_params(opts.window, epsilon);
      pattern = gen_bernoulli(Rational(1, 2), lp.pattern_length, opts.seed);
    }
    stream = gen_block_language(opts.window, epsilon, pattern);
  } else if (opts.kind == "sumlang") {
    Rational epsilon = parse_rational(opts.epsilon_text);
    std::vector<std::uint64_t> letters;
    if (!opts.pattern.empty()) {
      letters = parse_index_list(opts.pattern);
    } else {
      SumLanguageParams lp =
          sum_language_params(opts.window, opts.range, epsilon);
      if (lp.alphabet_size == 0)
        throw RegimeError("sum language alphabet is empty for these parameters");
      letters = gen_uniform(lp.alphabet_size - 1, opts.window, opts.seed);
    }
    stream = gen_sum_language(opts.window, opts.range, epsilon, letters);
  } else {
    throw std::invalid_argument("--kind must be bernoulli|uniform|blocks|sumlang");
  }
  for (std::uint64_t v : stream) out << v << "\n";
  return kOk;
}

}  // namespace detail

// Full command-line front end; streams injected for testability.
inline int run(const std::vector<std::string>& args, std::istream& in,
               std::ostream& out, std::ostream& err) {
  CLI::App app{"Sliding-window counting and summing sketches"};
  app.require_subcommand(1);

  CommonOptions count_opts, sum_opts, bounds_opts;
  GenOptions gen_opts;
  std::optional<std::uint64_t> bounds_range;

  auto add_common = [](CLI::App* cmd, CommonOptions& o, bool with_range) {
    cmd->add_option("-w,--window", o.window, "window length W")->required();
    cmd->add_option("-e,--epsilon", o.epsilon_text,
                    "additive error fraction, e.g. 1/64 or 0.015625")
        ->required();
    if (with_range)
      cmd->add_option("-r,--range", o.range, "value range bound R")->required();
    cmd->add_option("-i,--input", o.input, "stream file, or - for stdin");
    cmd->add_option("-q,--query-every", o.query_every,
                    "query cadence in elements")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--clamp", o.clamp, "clamp estimates into [0, W*R]");
    cmd->add_option("--report", o.report, "report format")
        ->check(CLI::IsMember({"json", "text"}));
  };

  CLI::App* count_cmd =
      app.add_subcommand("count", "count ones over a sliding window");
  add_common(count_cmd, count_opts, false);

  CLI::App* sum_cmd =
      app.add_subcommand("sum", "sum integers in [0, R] over a sliding window");
  add_common(sum_cmd, sum_opts, true);

  CLI::App* bounds_cmd =
      app.add_subcommand("bounds", "print the memory bound table");
  bounds_cmd->add_option("-w,--window", bounds_opts.window, "window length W")
      ->required();
  bounds_cmd
      ->add_option("-e,--epsilon", bounds_opts.epsilon_text,
                   "additive error fraction")
      ->required();
  bounds_cmd->add_option("-r,--range", bounds_range, "value range bound R");
  bounds_cmd->add_option("--report", bounds_opts.report, "report format")
      ->check(CLI::IsMember({"json", "text"}));

  CLI::App* gen_cmd = app.add_subcommand("gen", "generate a stream");
  gen_cmd
      ->add_option("--kind", gen_opts.kind,
                   "bernoulli|uniform|blocks|sumlang")
      ->required()
      ->check(CLI::IsMember({"bernoulli", "uniform", "blocks", "sumlang"}));
  gen_cmd->add_option("-w,--window", gen_opts.window, "window length W");
  gen_cmd->add_option("-e,--epsilon", gen_opts.epsilon_text,
                      "additive error fraction");
  gen_cmd->add_option("-r,--range", gen_opts.range, "value range bound R");
  gen_cmd->add_option("--p", gen_opts.p_text, "bernoulli one-probability");
  gen_cmd->add_option("--seed", gen_opts.seed, "generator seed");
  gen_cmd->add_option("--length", gen_opts.length, "stream length");
  gen_cmd->add_option("--pattern", gen_opts.pattern,
                      "block bits (e.g. 1011) or letter indices (e.g. 0,3,8)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return kOk;
    }
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (count_cmd->parsed()) return detail::run_count(count_opts, in, out);
    if (sum_cmd->parsed()) return detail::run_sum(sum_opts, in, out);
    if (bounds_cmd->parsed())
      return detail::run_bounds(bounds_opts, bounds_range, out);
    return detail::run_gen(gen_opts, out);
  } catch (const RegimeError& e) {
    err << "error: " << e.what() << "\n";
    return kRegime;
  } catch (const StreamParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInput;
  } catch (const StreamRangeError& e) {
    err << "error: " << e.what() << "\n";
    return kInput;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace sws::cli
