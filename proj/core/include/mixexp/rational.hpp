#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace mixexp {

/// Exact rational number backed by GMP. mpq_class keeps values in lowest
/// terms with a positive denominator, and zero as 0/1.
using Rational = mpq_class;

/// Builds p/q and canonicalizes it. Throws ParameterError when q == 0.
Rational make_rational(std::int64_t p, std::int64_t q = 1);

/// Parses "p", "p/q" or a finite decimal such as "-0.125" exactly.
Rational parse_rational(std::string_view text);

/// "p/q", or just "p" when the denominator is one.
std::string to_string(const Rational& r);

double to_double(const Rational& r);

/// Exact conversion of a finite double (every double is a dyadic rational).
Rational from_double(double v);

} // namespace mixexp
