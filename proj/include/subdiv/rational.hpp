#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace subdiv {

using Rational = mpq_class;

/// Parses "p/q", an integer, or a decimal literal such as "-0.046875" or
/// "1.5e-3" into an exact rational. Throws ParseError on anything else.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" (or "p" for integers).
std::string to_string(const Rational& q);

/// Exact conversion of a finite double.
Rational rational_from_double(double x);

inline double to_double(const Rational& q) { return q.get_d(); }

}  // namespace subdiv
