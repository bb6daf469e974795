#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace cgk {

using Rational = boost::rational<std::int64_t>;

/// Always "num/den", e.g. "119/288", "1/1", "-3/2".
std::string to_string(const Rational& x);

/// Accepts "a/b", "a", or a plain decimal integer with optional sign.
Rational parse_rational(std::string_view text);

double to_double(const Rational& x);

}  // namespace cgk
