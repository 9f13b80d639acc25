#pragma once

// Exact arithmetic used everywhere in the engine.  Rat is always stored in
// lowest terms with positive denominator (cpp_rational canonical form).

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>

namespace desing {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rat& r) { return numerator(r); }
inline Int rat_den(const Rat& r) { return denominator(r); }

inline Rat rat(long long n, long long d = 1) { return Rat(Int(n), Int(d)); }

inline bool is_integer(const Rat& r) { return rat_den(r) == 1; }

inline std::string to_string(const Int& n) { return n.str(); }

// Canonical text form: "n" or "n/d", d > 1.
inline std::string to_string(const Rat& r) {
  if (is_integer(r)) return rat_num(r).str();
  return rat_num(r).str() + "/" + rat_den(r).str();
}

inline Rat rat_from_string(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(s));
    Int n(s.substr(0, slash)), d(s.substr(slash + 1));
    if (d == 0) throw std::invalid_argument("zero denominator");
    return Rat(n, d);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad rational literal: " + s);
  }
}

inline Int int_gcd(Int a, Int b) { return boost::multiprecision::gcd(a, b); }
inline Int int_lcm(Int a, Int b) { return boost::multiprecision::lcm(a, b); }

}  // namespace desing
