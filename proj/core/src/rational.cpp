#include "symmkit/rational.hpp"

#include <stdexcept>

namespace symmkit {

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::optional<Rational> parse_rational(std::string_view text) {
  if (text.empty()) return std::nullopt;
  Rational q;
  if (q.set_str(std::string(text), 10) != 0) return std::nullopt;
  if (q.get_den() == 0) return std::nullopt;
  q.canonicalize();
  return q;
}

bool is_integer(const Rational& q) { return q.get_den() == 1; }

Rational power(const Rational& base, long exponent) {
  if (exponent == 0) return Rational(1);
  if (base == 0) {
    if (exponent < 0) throw std::domain_error("division by zero: 0 raised to a negative power");
    return Rational(0);
  }
  unsigned long e = exponent < 0 ? static_cast<unsigned long>(-exponent) : static_cast<unsigned long>(exponent);
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num().get_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), base.get_den().get_mpz_t(), e);
  Rational r = exponent < 0 ? Rational(den, num) : Rational(num, den);
  r.canonicalize();
  return r;
}

static std::optional<mpz_class> exact_int_root(const mpz_class& v, unsigned long n) {
  mpz_class r;
  if (mpz_root(r.get_mpz_t(), v.get_mpz_t(), n) == 0) return std::nullopt;
  return r;
}

std::optional<Rational> exact_root(const Rational& value, unsigned long n) {
  if (n == 0) return std::nullopt;
  if (n == 1) return value;
  if (value < 0 && n % 2 == 0) return std::nullopt;
  auto num = exact_int_root(value.get_num(), n);
  if (!num) return std::nullopt;
  auto den = exact_int_root(value.get_den(), n);
  if (!den) return std::nullopt;
  Rational r(*num, *den);
  r.canonicalize();
  return r;
}

std::size_t hash_value(const Rational& q) {
  std::size_t h = mpz_get_ui(q.get_num().get_mpz_t());
  if (q < 0) h = ~h;
  h ^= mpz_get_ui(q.get_den().get_mpz_t()) * 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

}  // namespace symmkit
