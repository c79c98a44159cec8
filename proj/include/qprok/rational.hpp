#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace qprok {

/// Exact rational number. Every coordinate, mass and metric value in the
/// library is one of these; nothing is ever rounded.
using Rational = mpq_class;

/// Parses "p/q", "p" or "-p/q". Whitespace is not accepted. The result is
/// canonicalized. Throws std::invalid_argument on malformed input or a zero
/// denominator.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" form ("p" when the denominator is 1).
std::string to_string(const Rational& value);

/// Nearest double, for plotting and tolerance comparisons only.
inline double to_double(const Rational& value) { return value.get_d(); }

inline Rational rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// Smallest integer >= value.
Rational ceil(const Rational& value);

inline const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }
inline Rational abs(const Rational& a) { return a < 0 ? Rational(-a) : a; }

}  // namespace qprok
