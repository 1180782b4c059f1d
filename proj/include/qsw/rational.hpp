#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qsw {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Int num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Int den(const Rational& r) { return boost::multiprecision::denominator(r); }

inline Int ipow(Int base, unsigned e) {
  Int r = 1;
  while (e) {
    if (e & 1u) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

/// q^e for rational-valued results; e may be negative.
inline Rational rpow(const Rational& base, long e) {
  if (e >= 0) {
    Int n = ipow(num(base), static_cast<unsigned>(e));
    Int d = ipow(den(base), static_cast<unsigned>(e));
    return Rational(n, d);
  }
  if (base == 0) throw std::domain_error("rpow: zero base with negative exponent");
  Int n = ipow(den(base), static_cast<unsigned>(-e));
  Int d = ipow(num(base), static_cast<unsigned>(-e));
  if (d < 0) {
    n = -n;
    d = -d;
  }
  return Rational(n, d);
}

inline bool is_integer(const Rational& r) { return den(r) == 1; }

inline long to_long(const Int& v) {
  if (v > std::numeric_limits<long>::max() || v < std::numeric_limits<long>::min())
    throw std::overflow_error("to_long: out of range");
  return static_cast<long>(v);
}

inline long to_long(const Rational& r) {
  if (!is_integer(r)) throw std::domain_error("to_long: not an integer");
  return to_long(num(r));
}

inline double to_double(const Rational& r) { return static_cast<double>(r); }

template <typename T>
std::string to_string(const T& v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

using RatVec = std::vector<Rational>;
using IntVec = std::vector<long>;

inline Rational dot(const RatVec& a, const RatVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  Rational s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace qsw
