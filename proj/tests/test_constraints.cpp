#include <doctest.h>

#include <random>

#include "otr/constraints.hpp"
#include "otr/errors.hpp"
#include "otr/master.hpp"
#include "otr/recursion.hpp"
#include "support.hpp"

using namespace otr;
using otr::testing::single;
using otr::testing::var;

namespace {

const TruncatedFreeEnergy& oracle8() {
  static const TruncatedFreeEnergy f = solve_F(8);
  return f;
}

}  // namespace

TEST_CASE("oracle coefficients") {
  const auto& f = oracle8();
  CHECK(f.coefficient({1, 1, 1}) == Rational(1, 6));
  CHECK(f.coefficient({3}) == Rational(13, 8));
  CHECK(f.coefficient({2, 2, 2}) == Rational(4, 3));
  CHECK(f.coefficient({1, 2}) == Rational(2));
  CHECK(f.coefficient({1, 1, 1, 3}) == Rational(1, 2));
  CHECK(f.coefficient({6}) == Rational(8));
  CHECK(f.coefficients().size() == 99);
}

TEST_CASE("free energy homogeneity and budget") {
  for (const auto& [m, c] : oracle8().coefficients()) {
    const auto key = stratum_of(m);
    REQUIRE(key.has_value());
    CHECK(key->stable());
    CHECK(key->measure() <= 8);
  }
  TruncatedFreeEnergy f(4);
  CHECK_THROWS(f.set({1, 1}, Rational(1)));
  CHECK_THROWS(f.set({1, 1, 1, 3, 3}, Rational(1)));
}

TEST_CASE("reading beyond the frontier is a bookkeeping error") {
  TruncatedFreeEnergy f(6);
  f.set_frontier(4);
  CHECK_THROWS_AS(f.coefficient({1, 1, 1, 3}), BookkeepingError);
  CHECK(f.coefficient({1, 1, 1}) == Rational(0));
}

TEST_CASE("current modes") {
  const auto& f = oracle8();
  CHECK(apply_J(0, f, {1, 1}) == Rational(0));
  CHECK(apply_J(-1, f, {1}) == Rational(1));
  CHECK(apply_J(-2, f, {2}) == Rational(2));
  CHECK(apply_J(1, f, {1, 1}) == Rational(1, 2));
}

TEST_CASE("sentinels at F = 0") {
  const auto zero = TruncatedFreeEnergy::zero();
  CHECK(act_on_exp(Lhat(0), zero, {}) == Rational(13, 8));
  CHECK(act_on_exp(Mhat(0), zero, {}) == Rational(3, 4));
  CHECK(act_on_exp(Lhat(1), zero, {}) == Rational(0));
}

TEST_CASE("solved free energy is annihilated") {
  const auto& f = oracle8();
  for (int k = 0; k <= 4; ++k) {
    CAPTURE(k);
    CHECK(apply_Lhat(k, f).is_zero());
    CHECK(apply_Mhat(k, f).is_zero());
  }
  CHECK(apply_Lhat(-1, f).is_zero());
  CHECK(apply_Mhat(-1, f).is_zero());
  CHECK(apply_Mhat(-2, f).is_zero());
}

TEST_CASE("recursion free energy equals the oracle") {
  CorrelatorStore store;
  compute_all(8, store, 2);
  const auto g = assemble_free_energy(store, 8);
  CHECK(g == oracle8());
  for (const auto& key : stable_keys(8)) CHECK(correlator_from_free_energy(oracle8(), key) == *store.find(key));
}

TEST_CASE("a perturbed free energy is detected") {
  TruncatedFreeEnergy f = oracle8();
  f.set({1, 1, 1, 3}, Rational(1));
  CHECK_FALSE(apply_Lhat(0, f).is_zero());
}

TEST_CASE("commutators on monomials") {
  for (const Monomial& basis : {Monomial{1, 2, 2, 5}, Monomial{3, 3}, Monomial{1, 1, 4, 7}}) {
    TPolynomial p;
    p.add_term(basis, Rational(1));
    for (int k = 0; k <= 2; ++k)
      for (int m = 0; m <= 2; ++m) {
        CAPTURE(k);
        CAPTURE(m);
        const auto ll = act_on_poly(Lhat(k), act_on_poly(Lhat(m), p)) - act_on_poly(Lhat(m), act_on_poly(Lhat(k), p));
        CHECK(ll == Rational(2 * (k - m)) * act_on_poly(Lhat(k + m), p));
        const auto ml =
            act_on_poly(MhatOpen(k), act_on_poly(Lhat(m), p)) - act_on_poly(Lhat(m), act_on_poly(MhatOpen(k), p));
        CHECK(ml == Rational(2 * (k - 2 * m)) * act_on_poly(MhatOpen(k + m), p) +
                        Rational(4 * m * (m + 1)) * act_on_poly(Lhat(k + m), p));
      }
  }
}

TEST_CASE("master equations vanish on the solution") {
  for (int budget : {6, 8}) {
    const auto f = solve_F(budget);
    CHECK(master_equation_residual(2, f, budget).is_zero());
    CHECK(master_equation_residual(3, f, budget).is_zero());
  }
  const auto f = solve_F(6);
  MasterOptions deeper;
  deeper.t_degree = 6 * (f.max_index() + 4);
  CHECK(master_equation_residual(2, f, 6, deeper).is_zero());
  CHECK(master_equation_residual(3, f, 6, deeper).is_zero());
}

TEST_CASE("master equations at F = 0") {
  const auto zero = TruncatedFreeEnergy::zero();
  const auto r2 = master_equation_residual(2, zero, 5, {6});
  CHECK_FALSE(r2.is_zero());
  CHECK(r2.coefficient(-2, {1, 1}) == Rational(-1, 2));
  const auto r3 = master_equation_residual(3, zero, 5, {6});
  CHECK_FALSE(r3.is_zero());
}

TEST_CASE("projection spans") {
  const auto z4 = single("z", -4, Rational(1));
  const auto z3 = single("z", -3, Rational(1));
  const auto z5 = single("z", -5, Rational(1));
  const auto z2 = single("z", 2, Rational(1));
  CHECK(project(2, z4) == z4);
  CHECK(project(2, z3).is_zero());
  CHECK(project(3, z3) == z3);
  CHECK(residue_form_of_projection(2, z4) == z4);
  CHECK(residue_form_of_projection(2, z2).is_zero());
  CHECK(residue_form_of_projection(3, z2).is_zero());
  CHECK(residue_form_of_projection(3, z5) == z5);
  CHECK(residue_form_of_projection(2, z5).is_zero());
}

TEST_CASE("residue projection equals span projection") {
  std::mt19937 rng(31337);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = otr::testing::random_laurent(rng, {var("z")}, 10, 11, 4);
    CHECK(residue_form_of_projection(2, a) == project(2, a));
    CHECK(residue_form_of_projection(3, a) == project(3, a));
  }
}

TEST_CASE("degree bound covers the budget") {
  CHECK(degree_bound(8) >= oracle8().max_index());
}
