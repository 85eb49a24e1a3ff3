#pragma once

#include <string>
#include <vector>

#include "otr/correlator.hpp"
#include "otr/free_energy.hpp"

namespace otr {

// ⟨τ_{a_1} … τ_{a_l} σ_{b_1} … σ_{b_k}⟩_h. τ_a pairs with t_{2a+1}, σ_b with t_{2b+2}.
struct IntersectionIndex {
  int twice_genus = 0;
  std::vector<int> interior;  // a_i
  std::vector<int> boundary;  // b_j

  int size() const { return static_cast<int>(interior.size() + boundary.size()); }
  CorrelatorKey key() const { return {twice_genus, size()}; }
  Monomial t_monomial() const;
  // Σ(2a+1) + Σ(2b+2) = 6h - 6 + 3(l+k)
  bool dimension_ok() const;
  // Sorted copy; brackets do not depend on the order of the lists.
  IntersectionIndex canonical() const;
  std::string to_string() const;

  static IntersectionIndex from_monomial(int twice_genus, const Monomial& m);
  friend auto operator<=>(const IntersectionIndex&, const IntersectionIndex&) = default;
};

struct Extraction {
  Rational value;
  bool dimension_violation = false;
};

// (2a+1)!! for τ_a and 2^{b+1}(b+1)! for σ_b.
Rational interior_normalization(int a);
Rational boundary_normalization(int b);

// Reads the bracket from the correlator W_{h,l+k}. Needs the key in the store and within budget.
Extraction extract_number(const IntersectionIndex& idx, const CorrelatorStore& store, int budget);
// Same bracket from a free energy: coefficient · ∏ multiplicities! / normalizations.
Extraction extract_number(const IntersectionIndex& idx, const TruncatedFreeEnergy& f);

// Polynomial in T_i = (2i+1)!! t_{2i+1} and S_i = 2^{i+1}(i+1)! t_{2i+2}. Monomials are stored
// with t-index labels, so T_i is label 2i+1 and S_i is label 2i+2.
class KPPolynomial {
 public:
  void add_term(const Monomial& labels, const Rational& c) { body_.add_term(labels, c); }
  Rational coefficient(const Monomial& labels) const { return body_.coefficient(labels); }
  const TPolynomial::Terms& terms() const { return body_.terms(); }
  // "3*T0^2*S1"
  std::string to_string() const;
  friend bool operator==(const KPPolynomial&, const KPPolynomial&) = default;

 private:
  TPolynomial body_;
};

KPPolynomial to_kp_coordinates(const TPolynomial& p);
TPolynomial from_kp_coordinates(const KPPolynomial& p);

// One bracket of the table.
struct TableRow {
  IntersectionIndex index;
  Rational value;
  std::string provenance;  // "recursion", "oracle" or "both-agree"
};

struct Table {
  int budget = 0;
  std::vector<TableRow> rows;
};

// Every nonzero bracket with 4h + n <= budget, ordered by h, n, then indices.
// Either source may be null; with both, any disagreement throws InconsistencyError.
Table tabulate(int budget, const CorrelatorStore* recursion, const TruncatedFreeEnergy* oracle);

// Serializations. Rationals are written "p/q" in CSV and text and {num, den} in JSON.
std::string table_to_json(const Table& table);
std::string table_to_csv(const Table& table);
std::string table_to_text(const Table& table);

std::string correlators_to_json(const CorrelatorStore& store, int budget);
std::string correlators_to_csv(const CorrelatorStore& store, int budget);
std::string correlators_to_text(const CorrelatorStore& store, int budget);

// Q-graded correlators, labeled experimental.
std::string q_correlators_to_json(const QCorrelatorStore& store, int budget);
std::string q_correlators_to_text(const QCorrelatorStore& store, int budget);

inline constexpr int kExportFormatVersion = 1;

}  // namespace otr
