#pragma once

#include <random>

#include "otr/laurent.hpp"

namespace otr::testing {

inline Variable var(const std::string& name, int weight = 1) { return {name, weight}; }

inline Laurent single(const std::string& name, int exponent, const Rational& c, int weight = 1) {
  return Laurent::monomial({var(name, weight)}, {exponent}, c);
}

// Sparse random element with the given variables; exponents in [-lo, hi].
inline Laurent random_laurent(std::mt19937& rng, const std::vector<Variable>& vars, int terms, int lo = 4, int hi = 3) {
  std::uniform_int_distribution<int> exponent(-lo, hi);
  std::uniform_int_distribution<int> num(-9, 9);
  std::uniform_int_distribution<int> den(1, 7);
  Laurent a(vars);
  for (int t = 0; t < terms; ++t) {
    Exponents e(vars.size());
    for (auto& x : e) x = exponent(rng);
    a.add_term(e, Rational(num(rng), den(rng)));
  }
  return a;
}

}  // namespace otr::testing
