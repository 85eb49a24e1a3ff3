#include "otr/aux_polynomial.hpp"

#include <algorithm>

namespace otr {

AuxPolynomial::AuxPolynomial(const Rational& constant) {
  if (!constant.is_zero()) coefficients_.push_back(constant);
}

AuxPolynomial AuxPolynomial::monomial(const Rational& coefficient, int degree) {
  AuxPolynomial p;
  if (coefficient.is_zero()) return p;
  p.coefficients_.assign(static_cast<std::size_t>(degree) + 1, Rational(0));
  p.coefficients_.back() = coefficient;
  return p;
}

int AuxPolynomial::low_degree() const {
  for (std::size_t i = 0; i < coefficients_.size(); ++i)
    if (!coefficients_[i].is_zero()) return static_cast<int>(i);
  return -1;
}

Rational AuxPolynomial::coefficient(int power) const {
  if (power < 0 || power > degree()) return Rational(0);
  return coefficients_[static_cast<std::size_t>(power)];
}

Rational AuxPolynomial::evaluate(const Rational& at) const {
  Rational acc(0);
  for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) acc = acc * at + *it;
  return acc;
}

std::string AuxPolynomial::to_string(const std::string& name) const {
  if (is_zero()) return "0";
  std::string out;
  for (std::size_t i = 0; i < coefficients_.size(); ++i) {
    const Rational& c = coefficients_[i];
    if (c.is_zero()) continue;
    if (!out.empty()) out += " + ";
    out += c.to_string();
    if (i == 1) out += "*" + name;
    if (i > 1) out += "*" + name + "^" + std::to_string(i);
  }
  return out;
}

void AuxPolynomial::trim() {
  while (!coefficients_.empty() && coefficients_.back().is_zero()) coefficients_.pop_back();
}

AuxPolynomial& AuxPolynomial::operator+=(const AuxPolynomial& o) {
  if (o.coefficients_.size() > coefficients_.size()) coefficients_.resize(o.coefficients_.size(), Rational(0));
  for (std::size_t i = 0; i < o.coefficients_.size(); ++i) coefficients_[i] += o.coefficients_[i];
  trim();
  return *this;
}

AuxPolynomial& AuxPolynomial::operator-=(const AuxPolynomial& o) {
  if (o.coefficients_.size() > coefficients_.size()) coefficients_.resize(o.coefficients_.size(), Rational(0));
  for (std::size_t i = 0; i < o.coefficients_.size(); ++i) coefficients_[i] -= o.coefficients_[i];
  trim();
  return *this;
}

AuxPolynomial& AuxPolynomial::operator*=(const AuxPolynomial& o) {
  if (is_zero() || o.is_zero()) {
    coefficients_.clear();
    return *this;
  }
  std::vector<Rational> r(coefficients_.size() + o.coefficients_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < coefficients_.size(); ++i) {
    if (coefficients_[i].is_zero()) continue;
    for (std::size_t j = 0; j < o.coefficients_.size(); ++j) r[i + j] += coefficients_[i] * o.coefficients_[j];
  }
  coefficients_ = std::move(r);
  trim();
  return *this;
}

AuxPolynomial& AuxPolynomial::operator*=(const Rational& r) {
  if (r.is_zero()) {
    coefficients_.clear();
    return *this;
  }
  for (auto& c : coefficients_) c *= r;
  return *this;
}

}  // namespace otr
