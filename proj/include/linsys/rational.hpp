#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace linsys {

using Rational = mpq_class;

/// Parses "p", "-p" or "p/q"; throws InputError on malformed text or q == 0.
Rational parse_rational(std::string_view text);

/// Canonical text form: "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& value);

bool is_integer(const Rational& value);
std::int64_t floor_to_int(const Rational& value);
std::int64_t ceil_to_int(const Rational& value);
/// Requires is_integer(value) and a value fitting in 64 bits.
std::int64_t to_int(const Rational& value);

}  // namespace linsys
