#pragma once

#include <string>
#include <vector>

#include "otr/rational.hpp"

namespace otr {

// Dense univariate polynomial over Rational in a named auxiliary parameter (Q or hbar).
class AuxPolynomial {
 public:
  AuxPolynomial() = default;
  AuxPolynomial(const Rational& constant);  // NOLINT(google-explicit-constructor)
  AuxPolynomial(int constant) : AuxPolynomial(Rational(constant)) {}  // NOLINT(google-explicit-constructor)

  static AuxPolynomial monomial(const Rational& coefficient, int degree);
  static AuxPolynomial parameter() { return monomial(Rational(1), 1); }

  bool is_zero() const { return coefficients_.empty(); }
  int degree() const { return static_cast<int>(coefficients_.size()) - 1; }
  // Smallest exponent with a nonzero coefficient; -1 for zero.
  int low_degree() const;
  Rational coefficient(int power) const;
  const std::vector<Rational>& coefficients() const { return coefficients_; }

  Rational evaluate(const Rational& at) const;

  // "5/8 + 15/2*Q^2", "0" when empty.
  std::string to_string(const std::string& name = "Q") const;

  AuxPolynomial& operator+=(const AuxPolynomial& o);
  AuxPolynomial& operator-=(const AuxPolynomial& o);
  AuxPolynomial& operator*=(const AuxPolynomial& o);
  AuxPolynomial& operator*=(const Rational& r);

  friend AuxPolynomial operator+(AuxPolynomial a, const AuxPolynomial& b) { return a += b; }
  friend AuxPolynomial operator-(AuxPolynomial a, const AuxPolynomial& b) { return a -= b; }
  friend AuxPolynomial operator*(AuxPolynomial a, const AuxPolynomial& b) { return a *= b; }
  friend AuxPolynomial operator*(AuxPolynomial a, const Rational& b) { return a *= b; }
  friend AuxPolynomial operator-(AuxPolynomial a) { return a *= Rational(-1); }
  friend bool operator==(const AuxPolynomial& a, const AuxPolynomial& b) {
    return a.coefficients_ == b.coefficients_;
  }

 private:
  void trim();
  std::vector<Rational> coefficients_;
};

inline bool is_zero(const AuxPolynomial& p) { return p.is_zero(); }
inline std::string to_string(const AuxPolynomial& p) { return p.to_string(); }

}  // namespace otr
