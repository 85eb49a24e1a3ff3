#pragma once

#include <climits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "otr/correlator.hpp"
#include "otr/rational.hpp"

namespace otr {

// Multiset of t-indices, kept sorted ascending. {1,1,2} is t_1^2 t_2.
using Monomial = std::vector<int>;

Monomial monomial_product(const Monomial& a, const Monomial& b);
// Removes one copy of each index of `part`; nullopt if `part` is not a sub-multiset.
std::optional<Monomial> monomial_quotient(const Monomial& whole, const Monomial& part);
// Multiplicity of `index` in `m`.
int multiplicity(const Monomial& m, int index);
// ∏ over distinct indices of (multiplicity)!.
Rational symmetry_factor(const Monomial& m);
std::string monomial_to_string(const Monomial& m);

// The stratum (2h, n) a monomial belongs to, from Σk = 6h - 6 + 3n; nullopt if h is not a
// nonnegative half-integer.
std::optional<CorrelatorKey> stratum_of(const Monomial& m);

// Nondecreasing tuples of `parts` positive integers summing to `total`.
std::vector<Monomial> partitions(int total, int parts);

// Exact polynomial in t_1, t_2, ...
class TPolynomial {
 public:
  using Terms = std::map<Monomial, Rational>;
  void add_term(const Monomial& m, const Rational& c);
  Rational coefficient(const Monomial& m) const;
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int max_index() const;
  std::string to_string() const;
  friend bool operator==(const TPolynomial&, const TPolynomial&) = default;

 private:
  Terms terms_;
};

TPolynomial operator+(const TPolynomial& a, const TPolynomial& b);
TPolynomial operator-(const TPolynomial& a, const TPolynomial& b);
TPolynomial operator*(const Rational& c, const TPolynomial& a);

// Stable part of the free energy, Σ over strata with 4g + n <= budget. The genus of a
// monomial is implied by homogeneity, so u never appears.
class TruncatedFreeEnergy {
 public:
  explicit TruncatedFreeEnergy(int budget = 0);
  // F = 0 with no reading restriction.
  static TruncatedFreeEnergy zero();

  int budget() const { return budget_; }
  bool covers(const CorrelatorKey& key) const { return key.measure() <= budget_; }
  int max_index() const;

  // Stores a coefficient; the monomial must lie in a stable stratum within budget.
  void set(const Monomial& m, const Rational& c);
  // Reads a coefficient. Reading a stratum at or beyond the frontier is a bookkeeping error.
  Rational coefficient(const Monomial& m) const;
  // Coefficient of t^rest in ∂/∂t_{idx...} F.
  Rational derivative_coefficient(const Monomial& rest, const Monomial& idx) const;

  // Strata with measure >= frontier may not be read.
  void set_frontier(int measure) { frontier_ = measure; }
  int frontier() const { return frontier_; }

  const std::map<Monomial, Rational>& coefficients() const { return coefficients_; }
  std::map<CorrelatorKey, TPolynomial> strata() const;
  TPolynomial stratum(const CorrelatorKey& key) const;

  friend bool operator==(const TruncatedFreeEnergy& a, const TruncatedFreeEnergy& b) {
    return a.coefficients_ == b.coefficients_;
  }

 private:
  int budget_;
  int frontier_;
  std::map<Monomial, Rational> coefficients_;
};

// F read off recursion output: coefficient of ∏ t_k^{m_k} is the W coefficient at
// exponents -(k+1) divided by ∏ m_k!.
TruncatedFreeEnergy assemble_free_energy(const CorrelatorStore& store, int budget);

// δ_1 ... δ_n F_{h,n} as a correlator in z1..zn.
Laurent correlator_from_free_energy(const TruncatedFreeEnergy& f, const CorrelatorKey& key);

}  // namespace otr
