#pragma once

#include <map>
#include <string>
#include <utility>

#include "otr/free_energy.hpp"
#include "otr/laurent.hpp"

namespace otr {

// Σ c · z^e · t^N · dz^f with a common form degree f.
class TSeries {
 public:
  using Key = std::pair<int, Monomial>;  // (z-exponent, t-monomial)

  explicit TSeries(int form_degree = 1) : form_degree_(form_degree) {}

  int form_degree() const { return form_degree_; }
  const std::map<Key, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  void add_term(int exponent, const Monomial& m, const Rational& c);
  Rational coefficient(int exponent, const Monomial& m) const;
  std::string to_string() const;

 private:
  int form_degree_;
  std::map<Key, Rational> terms_;
};

// Size measure of a term: (2G + 4f)/3 + n + 1 with G = Σk - e - 3n, returned times 3.
// It is additive under products up to -1 and unchanged by division by -z^2 dz.
int term_measure_thirds(int exponent, const Monomial& m, int form_degree);

// Keep even exponents <= -2 (which = 2) or odd exponents <= -3 (which = 3).
TSeries project(int which, const TSeries& a);
Laurent project(int which, const Laurent& a);

// The same projection computed as a residue against the expanded kernels
// ½(1/(z-w) - 1/(z+w)) and ½(1/(z-w) + 1/(z+w)) - 1/z. Input is a one-variable differential.
Laurent residue_form_of_projection(int which, const Laurent& a, const std::string& variable = "z");

struct MasterOptions {
  int t_degree = 0;  // truncation of the t-series; 0 means 3·(max index of F + 4)
};

// Terms with measure <= budget of the projected master-equation expressions
// (which = 2 for the quadratic one, 3 for the cubic one). Zero iff F solves the
// constraints to the budget.
TSeries master_equation_residual(int which, const TruncatedFreeEnergy& f, int budget,
                                 const MasterOptions& options = {});

}  // namespace otr
