#pragma once

#include <optional>
#include <string>
#include <vector>

#include "otr/correlator.hpp"
#include "otr/laurent.hpp"

namespace otr {

// Q-graded correlators: W_{1/2,1} carries Q and D_i carries Q^i. Values are experimental.
void compute_q_correlators(int budget, QCorrelatorStore& store, int threads = 1);

// Evaluates every coefficient at Q = q.
Laurent specialize_q(const QLaurent& value, const Rational& q);

// A term whose coefficient changes when the variables are permuted.
template <class C>
struct SymmetryWitness {
  std::vector<int> permutation;  // slot i of the permuted form reads slot permutation[i]
  Exponents term;
  C original;
  C permuted;
};

template <class C>
struct SymmetryReport {
  CorrelatorKey key;
  std::optional<SymmetryWitness<C>> witness;  // empty means symmetric
  bool symmetric() const { return !witness.has_value(); }
  std::string to_string() const;
};

// The differential with its n variables permuted: exponent slot i takes slot permutation[i].
template <class C>
LaurentDifferential<C> permute_variables(const LaurentDifferential<C>& value, const std::vector<int>& permutation);

// All n! permutations for n <= 4, every adjacent transposition beyond (they generate S_n).
template <class C>
SymmetryReport<C> symmetry_report(const CorrelatorKey& key, const LaurentDifferential<C>& value);

struct QStructureAudit {
  CorrelatorKey key;
  bool reduces_to_baseline = true;  // Q = 1 gives the ungraded correlator
  bool degree_bounded = true;       // every Q-degree <= 2h
  bool parity_consistent = true;    // every Q-power has the parity of 2h
  std::string first_failure;
  bool ok() const { return reduces_to_baseline && degree_bounded && parity_consistent; }
};

QStructureAudit audit_q_correlator(const CorrelatorKey& key, const QLaurent& graded, const Laurent& baseline);

}  // namespace otr
