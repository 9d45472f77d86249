#include "glround/rational.hpp"

#include <cmath>
#include <limits>

#include "glround/errors.hpp"

namespace glround {

namespace {

bool valid_integer_text(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  return true;
}

Integer parse_integer(std::string_view s) {
  if (!valid_integer_text(s)) {
    throw ParseError("not an integer: '" + std::string(s) + "'");
  }
  if (s[0] == '+') s.remove_prefix(1);
  return Integer(std::string(s), 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    return Rational(parse_integer(text));
  }
  Integer num = parse_integer(text.substr(0, slash));
  Integer den = parse_integer(text.substr(slash + 1));
  if (den == 0) {
    throw ParseError("zero denominator: '" + std::string(text) + "'");
  }
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(10); }

bool is_integer(const Rational& q) { return q.get_den() == 1; }

double to_double(const Rational& q) {
  if (q == 0) return 0.0;
  const double l = log_abs(q);
  if (l > 709.0) {
    return sgn(q) > 0 ? std::numeric_limits<double>::infinity()
                      : -std::numeric_limits<double>::infinity();
  }
  return q.get_d();
}

double log_abs(const Rational& q) {
  if (q == 0) throw DomainError("log of zero");
  long num_exp = 0;
  long den_exp = 0;
  const double num_mant = mpz_get_d_2exp(&num_exp, q.get_num_mpz_t());
  const double den_mant = mpz_get_d_2exp(&den_exp, q.get_den_mpz_t());
  return std::log(std::fabs(num_mant)) - std::log(den_mant) +
         static_cast<double>(num_exp - den_exp) * std::log(2.0);
}

long ceil_log2(const Rational& q) {
  if (sgn(q) <= 0) throw DomainError("ceil_log2 needs a positive argument");
  long e = static_cast<long>(std::floor(log_abs(q) / std::log(2.0))) - 2;
  while (pow2(e) < q) ++e;
  while (e > std::numeric_limits<long>::min() + 1 && pow2(e - 1) >= q) --e;
  return e;
}

Rational pow2(long e) {
  Integer one(1);
  Integer shifted;
  if (e >= 0) {
    mpz_mul_2exp(shifted.get_mpz_t(), one.get_mpz_t(), static_cast<mp_bitcnt_t>(e));
    return Rational(shifted);
  }
  mpz_mul_2exp(shifted.get_mpz_t(), one.get_mpz_t(), static_cast<mp_bitcnt_t>(-e));
  return Rational(one, shifted);
}

Rational pow(const Rational& base, unsigned long exponent) {
  Integer num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), exponent);
  return Rational(num, den);
}

}  // namespace glround
