#include <doctest.h>

#include "otr/aux_polynomial.hpp"
#include "otr/errors.hpp"
#include "otr/laurent.hpp"
#include "otr/rational.hpp"
#include "otr/recursion.hpp"
#include "support.hpp"

using namespace otr;
using otr::testing::random_laurent;
using otr::testing::single;
using otr::testing::var;

TEST_CASE("rationals stay in lowest terms") {
  CHECK(Rational(6, 8).to_string() == "3/4");
  CHECK(Rational(3, -6).to_string() == "-1/2");
  CHECK(Rational(4, 2).to_string() == "2");
  CHECK(Rational::parse("10/4") == Rational(5, 2));
  CHECK(Rational::parse("-7") == Rational(-7));
  CHECK_THROWS(Rational::parse("1/0"));
  CHECK_THROWS(Rational::parse("abc"));
  CHECK((Rational(1, 3) + Rational(1, 6)).to_string() == "1/2");
  CHECK(Rational(2, 3).pow(-2) == Rational(9, 4));
  CHECK(factorial(5) == Rational(120));
  CHECK(double_factorial(7) == Rational(105));
}

TEST_CASE("big rationals survive the byte encoding") {
  mpz_class big("123456789012345678901234567890123456789");
  CHECK(from_magnitude_bytes(magnitude_bytes(big)) == big);
  CHECK(magnitude_bytes(mpz_class(0)).empty());
  CHECK(magnitude_bytes(mpz_class(258)) == std::vector<std::uint8_t>{1, 2});
}

TEST_CASE("auxiliary polynomials") {
  const auto q = AuxPolynomial::parameter();
  AuxPolynomial p = AuxPolynomial(Rational(5, 8)) + AuxPolynomial::monomial(Rational(15, 2), 2);
  CHECK(p.to_string() == "5/8 + 15/2*Q^2");
  CHECK(p.evaluate(Rational(1)) == Rational(65, 8));
  CHECK((q * q - q * q).is_zero());
  CHECK((q + AuxPolynomial(-1)).degree() == 1);
  CHECK(AuxPolynomial().to_string() == "0");
}

TEST_CASE("add examples") {
  CHECK(add(single("z", -2, Rational(1)), single("z", -2, Rational(-1))).is_zero());
  const auto two = add(single("z", -1, Rational(1)), single("z", -3, Rational(1)));
  CHECK(two.size() == 2);
  CHECK(add(single("z", -7, Rational(3, 4)), single("z", -7, Rational(1, 4))) == single("z", -7, Rational(1)));
  CHECK_THROWS_AS(add(single("z", -1, Rational(1), 1), single("z", -1, Rational(1), 2)), StructuralError);
  CHECK_THROWS_AS(add(single("z", -1, Rational(1)), single("w", -1, Rational(1))), StructuralError);
}

TEST_CASE("mul examples") {
  CHECK(mul(single("z", -1, Rational(1)), single("z", -1, Rational(1))) == single("z", -2, Rational(1), 2));
  CHECK(mul(single("w", -2, Rational(1)), single("w", 2, Rational(-1))) == single("w", 0, Rational(-1), 2));
  const auto p = mul(single("z1", -2, Rational(1)), single("z2", -3, Rational(1)));
  CHECK(p.to_string() == "1 * z1^-2 z2^-3 dz1 dz2");
  CHECK(p.coefficient({-2, -3}) == Rational(1));
}

TEST_CASE("differentiate examples") {
  CHECK(differentiate(single("z", -1, Rational(1)), "z") == single("z", -2, Rational(-1)));
  CHECK(differentiate(single("z", 2, Rational(1)), "z") == single("z", 1, Rational(2)));
  CHECK(differentiate(single("z", 0, Rational(5)), "z").is_zero());
  CHECK_THROWS_AS(differentiate(single("z", 0, Rational(5)), "w"), StructuralError);
}

TEST_CASE("set_equal examples") {
  const Laurent a = Laurent::monomial({var("w1"), var("w2")}, {-2, -3}, Rational(1));
  CHECK(set_equal(a, {"w1", "w2"}, "w") == single("w", -5, Rational(1), 2));
  const Laurent b = Laurent::monomial({var("w1"), var("w2"), var("w3")}, {-1, -1, -1}, Rational(1));
  CHECK(set_equal(b, {"w1", "w2", "w3"}, "w") == single("w", -3, Rational(1), 3));
  const Laurent kernel = bergman_expansion("w1", "w2", 4);
  CHECK_THROWS_AS(set_equal(kernel, {"w1", "w2"}, "w"), UnrenormalizedDiagonal);
}

TEST_CASE("coefficient examples") {
  CHECK(single("z", -4, Rational(1)).coefficient({-4}) == Rational(1));
  CHECK(single("z", -4, Rational(1)).coefficient({-3}) == Rational(0));
  const Laurent a = Laurent::monomial({var("z1"), var("z2")}, {-2, -3}, Rational(2));
  CHECK(a.coefficient({-2, -3}) == Rational(2));
}

TEST_CASE("canonical text rendering") {
  Laurent a({var("z0"), var("w", 2)});
  a.add_term({-3, -2}, Rational(-1, 3));
  CHECK(a.to_string() == "-1/3 * z0^-3 w^-2 dz0 dw^2");
  CHECK(Laurent({var("z")}).to_string() == "0");
}

TEST_CASE("ring axioms on random sparse inputs") {
  std::mt19937 rng(20240611);
  const std::vector<Variable> vars{var("z1"), var("z2"), var("w", 0)};
  for (int trial = 0; trial < 25; ++trial) {
    const auto a = random_laurent(rng, vars, 6);
    const auto b = random_laurent(rng, vars, 5);
    const auto c = random_laurent(rng, vars, 4);
    CHECK(add(a, b) == add(b, a));
    CHECK(add(add(a, b), c) == add(a, add(b, c)));
    CHECK(mul(a, b) == mul(b, a));
    CHECK(mul(mul(a, b), c) == mul(a, mul(b, c)));
    CHECK(mul(a, add(b, c)) == add(mul(a, b), mul(a, c)));
    CHECK(subtract(a, a).is_zero());
    CHECK(audit_canonical(mul(mul(a, b), c)));
  }
}

TEST_CASE("Leibniz rule") {
  std::mt19937 rng(7);
  const std::vector<Variable> vars{var("z"), var("w")};
  for (int trial = 0; trial < 25; ++trial) {
    const auto a = random_laurent(rng, vars, 5);
    const auto b = random_laurent(rng, vars, 5);
    for (const char* v : {"z", "w"}) {
      const auto lhs = differentiate(mul(a, b), v);
      const auto rhs = add(mul(differentiate(a, v), b), mul(a, differentiate(b, v)));
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("set_equal commutes with add and mul") {
  std::mt19937 rng(99);
  const std::vector<Variable> vars{var("w1"), var("w2"), var("z")};
  for (int trial = 0; trial < 25; ++trial) {
    const auto a = random_laurent(rng, vars, 5);
    const auto b = random_laurent(rng, vars, 5);
    const auto eq = [](const Laurent& x) { return set_equal(x, {"w1", "w2"}, "w"); };
    CHECK(eq(add(a, b)) == add(eq(a), eq(b)));
    CHECK(eq(mul(a, b)) == mul(eq(a), eq(b)));
  }
}

TEST_CASE("truncated product drops only high powers") {
  std::mt19937 rng(5);
  const std::vector<Variable> vars{var("w"), var("z")};
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = random_laurent(rng, vars, 6);
    const auto b = random_laurent(rng, vars, 6);
    CHECK(mul(a, b, Truncation{"w", 1}) == truncate_above(mul(a, b), "w", 1));
    CHECK(mul(a, b, Truncation{"z", 0}) == truncate_above(mul(a, b), "z", 0));
  }
}

TEST_CASE("residue examples") {
  CHECK(residue_at_zero(single("w", -1, Rational(1)), "w").coefficient({}) == Rational(1));
  CHECK(residue_at_zero(single("w", -2, Rational(1)), "w").is_zero());
  const Laurent a = Laurent::monomial({var("z0"), var("w")}, {-4, -1}, Rational(1));
  CHECK(residue_at_zero(a, "w") == single("z0", -4, Rational(1)));
  CHECK_THROWS_AS(residue_at_zero(single("w", -1, Rational(1), 2), "w"), StructuralError);
}

TEST_CASE("Q-coefficient rendering is parenthesized") {
  QLaurent a({var("z1")});
  a.add_term({-4}, AuxPolynomial(Rational(1, 8)) + AuxPolynomial::monomial(Rational(3, 2), 2));
  CHECK(a.to_string() == "(1/8 + 3/2*Q^2) * z1^-4 dz1");
}
