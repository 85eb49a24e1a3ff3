#include "otr/rational.hpp"

#include <stdexcept>

#include "otr/errors.hpp"

namespace otr {

Rational::Rational(long numerator, long denominator) {
  if (denominator == 0) throw std::domain_error("Rational: zero denominator");
  value_ = mpq_class(numerator, denominator);
  value_.canonicalize();
}

Rational::Rational(mpq_class value) : value_(std::move(value)) { value_.canonicalize(); }

Rational Rational::from_parts(const mpz_class& numerator, const mpz_class& denominator) {
  if (sgn(denominator) == 0) throw std::domain_error("Rational: zero denominator");
  mpq_class q(numerator, denominator);
  q.canonicalize();
  return Rational(std::move(q));
}

Rational Rational::parse(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("Rational: empty string");
  const auto slash = s.find('/');
  mpz_class num;
  mpz_class den = 1;
  try {
    if (slash == std::string::npos) {
      num = mpz_class(s, 10);
    } else {
      num = mpz_class(s.substr(0, slash), 10);
      den = mpz_class(s.substr(slash + 1), 10);
    }
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("Rational: cannot parse '" + s + "'");
  }
  return from_parts(num, den);
}

std::string Rational::to_string() const { return value_.get_str(10); }

bool Rational::is_canonical() const {
  if (sgn(value_.get_den()) <= 0) return false;
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
  return g == 1;
}

Rational Rational::pow(int exponent) const {
  if (exponent < 0) return inverse().pow(-exponent);
  mpz_class num;
  mpz_class den;
  mpz_pow_ui(num.get_mpz_t(), value_.get_num_mpz_t(), static_cast<unsigned long>(exponent));
  mpz_pow_ui(den.get_mpz_t(), value_.get_den_mpz_t(), static_cast<unsigned long>(exponent));
  return from_parts(num, den);
}

Rational Rational::inverse() const {
  if (is_zero()) throw std::domain_error("Rational: inverse of zero");
  return Rational(mpq_class(1 / value_));
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("Rational: division by zero");
  value_ /= o.value_;
  return *this;
}

Rational factorial(int n) {
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n < 0 ? 0 : n));
  return Rational(mpq_class(r));
}

Rational double_factorial(int n) {
  // (-1)!! = 1
  mpz_class r = 1;
  for (int k = n; k > 1; k -= 2) r *= k;
  return Rational(mpq_class(r));
}

std::vector<std::uint8_t> magnitude_bytes(const mpz_class& value) {
  if (sgn(value) == 0) return {};
  std::size_t count = 0;
  const std::size_t size = (mpz_sizeinbase(value.get_mpz_t(), 2) + 7) / 8;
  std::vector<std::uint8_t> out(size);
  mpz_export(out.data(), &count, 1, 1, 1, 0, value.get_mpz_t());
  out.resize(count);
  return out;
}

mpz_class from_magnitude_bytes(const std::vector<std::uint8_t>& bytes) {
  mpz_class r;
  if (!bytes.empty()) mpz_import(r.get_mpz_t(), bytes.size(), 1, 1, 1, 0, bytes.data());
  return r;
}

}  // namespace otr
