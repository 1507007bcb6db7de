#ifndef CFCM_RATIONAL_HPP
#define CFCM_RATIONAL_HPP

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

namespace cfcm {

/// Exact arbitrary-precision rational. All probabilities in the library use it.
using Rational = mpq_class;

/// Canonical "p/q" rendering; integers print without a denominator ("0", "1").
std::string to_string(const Rational& r);

/// Parses "p/q" or an integer literal. Decimal literals are rejected.
std::optional<Rational> parse_rational(std::string_view text);

double to_double(const Rational& r);

}  // namespace cfcm

#endif  // CFCM_RATIONAL_HPP
