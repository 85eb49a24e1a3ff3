#include "otr/qrefine.hpp"

#include <algorithm>
#include <numeric>

#include "otr/recursion.hpp"

namespace otr {

void compute_q_correlators(int budget, QCorrelatorStore& store, int threads) {
  compute_all(budget, store, threads);
}

Laurent specialize_q(const QLaurent& value, const Rational& q) {
  return map_coefficients<Rational>(value, [&](const AuxPolynomial& p) { return p.evaluate(q); });
}

template <class C>
LaurentDifferential<C> permute_variables(const LaurentDifferential<C>& value, const std::vector<int>& permutation) {
  LaurentDifferential<C> out(value.variables());
  for (const auto& [e, c] : value.terms()) {
    Exponents p(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) p[i] = e[permutation[i]];
    out.add_term(p, c);
  }
  return out;
}

namespace {

std::string render(const Rational& c) { return c.to_string(); }
std::string render(const AuxPolynomial& c) { return c.to_string("Q"); }

std::string render_exponents(const Exponents& e) {
  std::string s = "(";
  for (std::size_t i = 0; i < e.size(); ++i) s += (i ? "," : "") + std::to_string(e[i]);
  return s + ")";
}

template <class C>
std::optional<SymmetryWitness<C>> compare(const LaurentDifferential<C>& value, const std::vector<int>& perm) {
  const auto moved = permute_variables(value, perm);
  if (moved == value) return std::nullopt;
  // The first term where the two disagree, scanning both term sets.
  for (const auto& [e, c] : value.terms()) {
    C m = moved.coefficient(e);
    if (!(m == c)) return SymmetryWitness<C>{perm, e, c, m};
  }
  for (const auto& [e, c] : moved.terms()) {
    C o = value.coefficient(e);
    if (!(o == c)) return SymmetryWitness<C>{perm, e, o, c};
  }
  return std::nullopt;
}

}  // namespace

template <class C>
std::string SymmetryReport<C>::to_string() const {
  if (!witness) return key.to_string() + ": symmetric";
  std::string perm;
  for (int p : witness->permutation) perm += (perm.empty() ? "" : " ") + std::to_string(p + 1);
  return key.to_string() + ": not symmetric under (" + perm + ") at exponents " + render_exponents(witness->term) +
         ": " + render(witness->original) + " vs " + render(witness->permuted);
}

template <class C>
SymmetryReport<C> symmetry_report(const CorrelatorKey& key, const LaurentDifferential<C>& value) {
  SymmetryReport<C> report{key, std::nullopt};
  const int n = static_cast<int>(value.variables().size());
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  if (n <= 4) {
    while (std::next_permutation(perm.begin(), perm.end())) {
      if ((report.witness = compare(value, perm))) return report;
    }
    return report;
  }
  for (int i = 0; i + 1 < n; ++i) {
    std::vector<int> swap = perm;
    std::swap(swap[i], swap[i + 1]);
    if ((report.witness = compare(value, swap))) return report;
  }
  return report;
}

QStructureAudit audit_q_correlator(const CorrelatorKey& key, const QLaurent& graded, const Laurent& baseline) {
  QStructureAudit audit;
  audit.key = key;
  if (!(specialize_q(graded, Rational(1)) == baseline)) {
    audit.reduces_to_baseline = false;
    audit.first_failure = key.to_string() + ": Q = 1 differs from the baseline";
  }
  for (const auto& [e, c] : graded.terms()) {
    if (c.degree() > key.twice_genus) {
      if (audit.degree_bounded && audit.first_failure.empty())
        audit.first_failure = key.to_string() + ": Q-degree " + std::to_string(c.degree()) + " at " +
                              render_exponents(e);
      audit.degree_bounded = false;
    }
    const auto& coeffs = c.coefficients();
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      if (coeffs[k].is_zero() || static_cast<int>(k % 2) == key.twice_genus % 2) continue;
      if (audit.parity_consistent && audit.first_failure.empty())
        audit.first_failure = key.to_string() + ": Q^" + std::to_string(k) + " at " + render_exponents(e);
      audit.parity_consistent = false;
    }
  }
  return audit;
}

template Laurent permute_variables(const Laurent&, const std::vector<int>&);
template QLaurent permute_variables(const QLaurent&, const std::vector<int>&);
template struct SymmetryReport<Rational>;
template struct SymmetryReport<AuxPolynomial>;
template SymmetryReport<Rational> symmetry_report(const CorrelatorKey&, const Laurent&);
template SymmetryReport<AuxPolynomial> symmetry_report(const CorrelatorKey&, const QLaurent&);

}  // namespace otr
