#pragma once

#include <cstdint>
#include <cstdio>
#include <random>
#include <stdexcept>
#include <string>

namespace threshnet {

inline constexpr const char* kVersion = "0.1.0";

// Base error for recoverable computational failures (degenerate splits,
// collinear designs, malformed input). Contract violations throw
// std::invalid_argument instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateSplit : public Error {
 public:
  DegenerateSplit() : Error("degenerate split") {}
};

class CollinearDesign : public Error {
 public:
  CollinearDesign() : Error("collinear design") {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& path, std::size_t line, const std::string& what)
      : Error(path + ":" + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

using Rng = std::mt19937_64;

// Independent stream for (seed, a, b, c). seed_seq mixes every word, so
// neighbouring indices do not produce correlated engines.
inline Rng derive_rng(std::uint64_t seed, std::uint64_t a = 0, std::uint64_t b = 0,
                      std::uint64_t c = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(a),    static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b),    static_cast<std::uint32_t>(c)};
  return Rng(seq);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a = 0, std::uint64_t b = 0,
                                 std::uint64_t c = 0) {
  auto rng = derive_rng(seed, a, b, c);
  return rng();
}

// Fixed 12-significant-digit rendering used by every result table.
inline std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

// Shortest representation that reloads to the same double.
inline std::string format_exact(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace threshnet
