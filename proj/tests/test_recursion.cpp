#include <doctest.h>

#include <map>

#include "otr/errors.hpp"
#include "otr/recursion.hpp"
#include "support.hpp"

using namespace otr;
using otr::testing::single;
using otr::testing::var;

namespace {

const CorrelatorStore& store8() {
  static const CorrelatorStore* store = [] {
    auto* s = new CorrelatorStore;
    compute_all(8, *s, 2);
    return s;
  }();
  return *store;
}

}  // namespace

TEST_CASE("keys") {
  CHECK(CorrelatorKey::parse("1/2", 3) == CorrelatorKey{1, 3});
  CHECK(CorrelatorKey::parse("2", 1) == CorrelatorKey{4, 1});
  CHECK_THROWS_AS(CorrelatorKey::parse("1/3", 1), ContractError);
  CHECK_THROWS_AS(CorrelatorKey::parse("-1", 1), ContractError);
  CHECK_THROWS_AS(CorrelatorKey::parse("0", 0), ContractError);
  CHECK_FALSE(CorrelatorKey{0, 1}.stable());
  CHECK_FALSE(CorrelatorKey{1, 1}.stable());
  CHECK_FALSE(CorrelatorKey{0, 2}.stable());
  CHECK(CorrelatorKey{0, 3}.stable());
  CHECK(CorrelatorKey{1, 2}.to_string() == "W_{1/2,2}");
  CHECK(stable_keys(8).size() == 17);
}

TEST_CASE("initial conditions") {
  CHECK(base_correlator({0, 1}).to_string() == "-1 * z1^2 dz1");
  CHECK(base_correlator({1, 1}).to_string() == "1 * z1^-1 dz1");
  CHECK_THROWS_AS(base_correlator({0, 2}), ContractError);
  CHECK_THROWS_AS(base_correlator({0, 3}), ContractError);
  const auto w = tilde_w02_diagonal();
  CHECK(w.coefficient({-2}) == Rational(1, 4));
  CHECK(w.weight("w") == 2);
  CHECK(w.size() == 1);
}

TEST_CASE("expanded B integrals") {
  CHECK(expand_B_integral(1, 3).to_string() == "1 * z0^-4 w^3 dz0 + 1 * z0^-3 w^2 dz0 + 1 * z0^-2 w dz0");
  CHECK(expand_B_integral(-1, 2).to_string() == "1 * z0^-3 w^2 dz0 + -1 * z0^-2 w dz0");
  CHECK(expand_B_integral(1, 1).to_string() == "1 * z0^-2 w dz0");
}

TEST_CASE("kernels") {
  const auto k2 = kernel(2, 12);
  const auto k3 = kernel(3, 12);
  CHECK(k2.weight("w") == -1);
  CHECK(k3.weight("w") == -2);
  CHECK(k2.coefficient({-2, -1}) == Rational(1, 2));
  CHECK(k3.coefficient({-3, -2}) == Rational(-1, 3));
  CHECK(k2.max_exponent("w") <= 11);
  for (const auto& [e, c] : k2.terms()) CHECK(e[1] % 2 != 0);
  for (const auto& [e, c] : k3.terms()) CHECK(e[1] % 2 == 0);
  // Closed forms: ½ w^{2i-1} z0^{-2i-2} and -⅓ w^{2i-4} z0^{-2i-1}.
  for (int i = 0; i < 5; ++i) CHECK(k2.coefficient({-2 * i - 2, 2 * i - 1}) == Rational(1, 2));
  for (int i = 1; i < 5; ++i) CHECK(k3.coefficient({-2 * i - 1, 2 * i - 4}) == Rational(-1, 3));
}

TEST_CASE("D1 and D2 examples") {
  CHECK(apply_D1(single("w", -1, Rational(1)), "w") == single("w", -2, Rational(2), 2));
  CHECK(apply_D1(single("w", -3, Rational(1)), "w") == single("w", -4, Rational(4), 2));
  CHECK(apply_D1(single("w", 1, Rational(1)), "w").is_zero());
  CHECK(apply_D2(single("w", -1, Rational(1)), "w") == single("w", -3, Rational(4), 3));
  CHECK(apply_D2(single("w", 1, Rational(1)), "w").is_zero());
  CHECK(apply_D2(single("w", -2, Rational(1)), "w") == single("w", -4, Rational(15, 2), 3));
}

TEST_CASE("kernel order bound") {
  CHECK(required_kernel_order({0, 3}) >= 6);
  CHECK(required_kernel_order({2, 1}) >= 10);
}

TEST_CASE("quadratic integrand of W_{0,3} is the two cross pairings") {
  CorrelatorStore store;
  const int order = required_kernel_order({0, 3});
  const auto r2 = assemble_R2(CorrelatorKey{0, 3}, store, order);
  const auto b1 = bergman_expansion("w", "z1", order);
  const auto b2 = bergman_expansion("w", "z2", order);
  auto expected = mul(b1, b2);
  expected *= Rational(2);
  expected = truncate_above(expected, "w", 1);
  CHECK(r2.to_string() == expected.to_string());
}

TEST_CASE("frozen oracle values") {
  const auto& s = store8();
  CHECK(s.find({0, 3})->to_string() == "1 * z1^-2 z2^-2 z3^-2 dz1 dz2 dz3");
  CHECK(s.find({1, 2})->to_string() == "2 * z1^-3 z2^-2 dz1 dz2 + 2 * z1^-2 z2^-3 dz1 dz2");
  CHECK(s.find({2, 1})->to_string() == "13/8 * z1^-4 dz1");
  CHECK(s.find({3, 1})->to_string() == "8 * z1^-7 dz1");
  CHECK(s.find({0, 4})->coefficient({-4, -2, -2, -2}) == Rational(3));
  CHECK(s.find({1, 3})->coefficient({-3, -3, -3}) == Rational(8));
  CHECK(s.find({2, 2})->coefficient({-6, -2}) == Rational(65, 8));
  CHECK(s.find({2, 2})->coefficient({-5, -3}) == Rational(8));
  CHECK(s.find({2, 2})->coefficient({-4, -4}) == Rational(39, 8));
  CHECK(s.find({3, 2})->coefficient({-9, -2}) == Rational(64));
  CHECK(s.find({3, 2})->coefficient({-5, -6}) == Rational(60));
}

TEST_CASE("frozen term counts at budget 8") {
  const std::map<CorrelatorKey, std::size_t> counts{
      {{0, 3}, 1},   {{0, 4}, 4},    {{1, 2}, 2},    {{0, 5}, 15}, {{1, 3}, 10}, {{2, 1}, 1},
      {{0, 6}, 56},  {{1, 4}, 56},   {{2, 2}, 5},    {{0, 7}, 210}, {{1, 5}, 330}, {{2, 3}, 28},
      {{3, 1}, 1},   {{0, 8}, 792},  {{1, 6}, 2002}, {{2, 4}, 165}, {{3, 2}, 8}};
  for (const auto& [key, count] : counts) {
    CAPTURE(key.to_string());
    CHECK(store8().find(key)->size() == count);
  }
}

TEST_CASE("homogeneity of every term") {
  for (const auto& key : stable_keys(8)) {
    const auto& value = *store8().find(key);
    for (const auto& [e, c] : value.terms()) {
      int total = 0;
      for (int x : e) {
        CHECK(x <= -2);
        total -= x;
      }
      CHECK(total == key.pole_total());
    }
  }
}

TEST_CASE("truncation robustness and fused residue") {
  CorrelatorStore store;
  compute_all(6, store, 1);
  for (const auto& key : stable_keys(6)) {
    CAPTURE(key.to_string());
    RecursionOptions doubled;
    doubled.kernel_order = 2 * required_kernel_order(key);
    CHECK(compute_correlator(key, store, doubled) == *store.find(key));
    RecursionOptions unfused;
    unfused.fused_residue = false;
    CHECK(compute_correlator(key, store, unfused) == *store.find(key));
  }
  RecursionOptions tiny;
  tiny.kernel_order = 2;
  CHECK_THROWS_AS(compute_correlator(CorrelatorKey{2, 2}, store, tiny), ContractError);
}

TEST_CASE("parallel and sequential stores agree") {
  CorrelatorStore sequential;
  compute_all(7, sequential, 1);
  CorrelatorStore parallel;
  compute_all(7, parallel, 8);
  for (const auto& key : stable_keys(7)) CHECK(*sequential.find(key) == *parallel.find(key));
}

TEST_CASE("dependencies precede their dependents") {
  for (const auto& key : stable_keys(10))
    for (const auto& dep : dependencies(key)) {
      CAPTURE(key.to_string());
      CAPTURE(dep.to_string());
      CHECK(dep.measure() < key.measure());
    }
}

TEST_CASE("missing dependency is a contract error") {
  CorrelatorStore empty;
  CHECK_THROWS_AS(compute_correlator(CorrelatorKey{0, 4}, empty), ContractError);
}
