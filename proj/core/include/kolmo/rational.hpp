#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace kolmo {

// Exact rational scalar used by all discrete-measure and kernel arithmetic.
// Arbitrary precision so path-enumeration products never overflow.
using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Renders "a/b" in lowest terms, or just "a" when the denominator is 1.
inline std::string rat_to_string(const Rat& r) {
  std::string s = numerator(r).str();
  if (denominator(r) != 1) {
    s += "/";
    s += denominator(r).str();
  }
  return s;
}

// Accepts "a" or "a/b"; b must be positive.
inline Rat rat_from_string(const std::string& text) {
  const auto slash = text.find('/');
  if (text.empty() || slash == 0 || slash == text.size() - 1) {
    throw std::invalid_argument("malformed rational: " + text);
  }
  try {
    if (slash == std::string::npos) {
      return Rat(BigInt(text));
    }
    BigInt num(text.substr(0, slash));
    BigInt den(text.substr(slash + 1));
    if (den <= 0) {
      throw std::invalid_argument("rational denominator must be positive: " + text);
    }
    return Rat(num, den);
  } catch (const std::runtime_error&) {
    throw std::invalid_argument("malformed rational: " + text);
  }
}

inline double rat_to_double(const Rat& r) { return r.convert_to<double>(); }

inline Rat rat_pow(const Rat& base, unsigned exponent) {
  Rat acc(1);
  Rat b = base;
  unsigned e = exponent;
  while (e > 0) {
    if (e & 1u) acc *= b;
    b *= b;
    e >>= 1u;
  }
  return acc;
}

}  // namespace kolmo
