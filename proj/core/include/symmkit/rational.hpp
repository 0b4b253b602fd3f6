#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace symmkit {

using Rational = mpq_class;

std::string to_string(const Rational& q);
std::optional<Rational> parse_rational(std::string_view text);

bool is_integer(const Rational& q);
Rational power(const Rational& base, long exponent);
// exact n-th root when one exists in Q (odd roots of negatives allowed)
std::optional<Rational> exact_root(const Rational& value, unsigned long n);

std::size_t hash_value(const Rational& q);

}  // namespace symmkit
