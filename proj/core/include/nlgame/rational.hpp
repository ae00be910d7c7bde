#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "nlgame/errors.hpp"

namespace nlgame {

using Rational = mpq_class;

/// Parses "p/q", "p", or a plain decimal like "0.25" into an exact rational.
Rational parse_rational(const std::string& text);

/// Canonical "p/q" form ("p" when q == 1).
std::string rational_to_string(const Rational& q);

inline double to_double(const Rational& q) { return q.get_d(); }

/// Exact rational image of a binary64 value (every finite double is rational).
Rational rational_from_double(double x);

}  // namespace nlgame
