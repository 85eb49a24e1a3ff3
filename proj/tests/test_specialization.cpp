#include <doctest.h>

#include "otr/constraints.hpp"
#include "otr/errors.hpp"
#include "otr/specialization.hpp"

using namespace otr;

namespace {

const TruncatedFreeEnergy& oracle9() {
  static const TruncatedFreeEnergy f = solve_F(9);
  return f;
}

}  // namespace

TEST_CASE("principal specialization terms") {
  const auto psi = principal_specialize(oracle9(), 2);
  CHECK(psi.coefficient({-1, 3, false}) == Rational(1, 3));
  CHECK(psi.coefficient({0, 0, true}) == Rational(-3, 4));
  // t1^3/6, 2 t1 t2 and 13/8 t3 all land at hbar^1 z^-3.
  CHECK(psi.coefficient({1, -3, false}) == Rational(1, 6) + Rational(1) + Rational(13, 24));
  CHECK(psi.stratum(1).terms().size() == 1);
  CHECK(psi.stratum(2).terms().size() == 1);
  for (const auto& [k, c] : psi.terms()) CHECK(k.hbar_power <= 2);
}

TEST_CASE("strata beyond the order are not read") {
  const auto small = principal_specialize(solve_F(5), 1);
  CHECK(small.stratum(2).is_zero());
  CHECK(principal_specialize(oracle9(), 1).terms() == small.terms());
}

TEST_CASE("uncovered stratum is a contract error") {
  CHECK_THROWS_AS(principal_specialize(solve_F(6), 3), ContractError);
}

TEST_CASE("quantum curve residual vanishes at Q = 1") {
  for (int order = 0; order <= 3; ++order) {
    CAPTURE(order);
    const auto psi = principal_specialize(oracle9(), order);
    const auto residual = quantum_curve_residual(psi, Rational(1), order);
    CHECK(residual.is_zero());
    for (const auto& s : residual_by_stratum(residual, order)) CHECK(s.zero);
  }
}

TEST_CASE("symbolic Q residual") {
  const auto psi = principal_specialize(oracle9(), 2);
  const auto residual = quantum_curve_residual(psi, 2);
  // y^3 - 2xy = 0 holds with Q symbolic.
  CHECK(residual.stratum(0).is_zero());
  // The only Q-dependence is the 2 hbar (Q - 1) term.
  CHECK(residual.to_string() == "(-2 + 2*Q) * hbar^1 z^0");
  const auto at_two = quantum_curve_residual(psi, Rational(2), 2);
  CHECK(at_two.coefficient({1, 0, false}) == Rational(2));
}

TEST_CASE("single-coefficient mutations are detected") {
  for (const Monomial& m : {Monomial{1, 1, 1}, Monomial{2, 2, 2}, Monomial{3}, Monomial{1, 2}, Monomial{1, 1, 1, 3}}) {
    CAPTURE(monomial_to_string(m));
    TruncatedFreeEnergy f = oracle9();
    f.set(m, f.coefficient(m) + Rational(1, 7));
    const auto residual = quantum_curve_residual(principal_specialize(f, 2), Rational(1), 2);
    CHECK_FALSE(residual.is_zero());
  }
}
