#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "otr/aux_polynomial.hpp"
#include "otr/errors.hpp"
#include "otr/rational.hpp"

namespace otr {

// A named variable with the number of attached differentials (may be negative inside kernels).
struct Variable {
  std::string name;
  int weight = 0;
  friend bool operator==(const Variable&, const Variable&) = default;
};

using Exponents = std::vector<int>;

// Drop product terms whose exponent in `variable` exceeds `max_exponent`.
struct Truncation {
  std::string variable;
  int max_exponent = 0;
};

// Sparse Laurent polynomial in an ordered set of named variables, times a fixed
// product of differentials. Terms are kept in lexicographic exponent order.
template <class C>
class LaurentDifferential {
 public:
  using Coefficient = C;
  using Terms = std::map<Exponents, C>;

  LaurentDifferential() = default;
  explicit LaurentDifferential(std::vector<Variable> variables);

  static LaurentDifferential monomial(std::vector<Variable> variables, Exponents exponents, C coefficient);

  const std::vector<Variable>& variables() const { return variables_; }
  std::size_t arity() const { return variables_.size(); }
  int index_of(const std::string& name) const;
  int weight(const std::string& name) const;
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  // Accumulate into the term with the given exponents, erasing it if it cancels.
  void add_term(const Exponents& exponents, const C& coefficient);
  C coefficient(const Exponents& exponents) const;

  // Smallest / largest exponent of a variable over all terms (nullopt when zero).
  std::optional<int> min_exponent(const std::string& name) const;
  std::optional<int> max_exponent(const std::string& name) const;

  // Pairs of variables that came from expanding a kernel with a diagonal pole.
  const std::vector<std::pair<std::string, std::string>>& expanded_pairs() const { return expanded_pairs_; }
  void mark_expanded_pair(const std::string& a, const std::string& b);

  LaurentDifferential& operator*=(const Rational& r);
  LaurentDifferential& scale(const C& c);

  std::string to_string() const;

  friend bool operator==(const LaurentDifferential& a, const LaurentDifferential& b) {
    return a.variables_ == b.variables_ && a.terms_ == b.terms_;
  }

  // Internal mutation for algorithms that build terms directly.
  Terms& mutable_terms() { return terms_; }
  std::vector<Variable>& mutable_variables() { return variables_; }
  std::vector<std::pair<std::string, std::string>>& mutable_pairs() { return expanded_pairs_; }

 private:
  std::vector<Variable> variables_;
  Terms terms_;
  std::vector<std::pair<std::string, std::string>> expanded_pairs_;
};

using Laurent = LaurentDifferential<Rational>;
using QLaurent = LaurentDifferential<AuxPolynomial>;

namespace detail {

inline bool is_zero_coefficient(const Rational& c) { return c.is_zero(); }
inline bool is_zero_coefficient(const AuxPolynomial& c) { return c.is_zero(); }

inline std::string render_coefficient(const Rational& c) { return c.to_string(); }
inline std::string render_coefficient(const AuxPolynomial& c) {
  std::string s = c.to_string("Q");
  if (c.degree() > 0 && (c.low_degree() < c.degree() || s.find(' ') != std::string::npos)) return "(" + s + ")";
  return s;
}

inline void merge_pairs(std::vector<std::pair<std::string, std::string>>& into,
                        const std::vector<std::pair<std::string, std::string>>& from) {
  for (const auto& p : from)
    if (std::find(into.begin(), into.end(), p) == into.end()) into.push_back(p);
}

}  // namespace detail

template <class C>
LaurentDifferential<C>::LaurentDifferential(std::vector<Variable> variables) : variables_(std::move(variables)) {
  for (std::size_t i = 0; i < variables_.size(); ++i)
    for (std::size_t j = i + 1; j < variables_.size(); ++j)
      if (variables_[i].name == variables_[j].name)
        throw StructuralError("duplicate variable '" + variables_[i].name + "'");
}

template <class C>
LaurentDifferential<C> LaurentDifferential<C>::monomial(std::vector<Variable> variables, Exponents exponents,
                                                        C coefficient) {
  LaurentDifferential r(std::move(variables));
  if (exponents.size() != r.arity()) throw StructuralError("monomial: exponent arity mismatch");
  r.add_term(exponents, coefficient);
  return r;
}

template <class C>
int LaurentDifferential<C>::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < variables_.size(); ++i)
    if (variables_[i].name == name) return static_cast<int>(i);
  return -1;
}

template <class C>
int LaurentDifferential<C>::weight(const std::string& name) const {
  const int i = index_of(name);
  if (i < 0) throw StructuralError("unknown variable '" + name + "'");
  return variables_[static_cast<std::size_t>(i)].weight;
}

template <class C>
void LaurentDifferential<C>::add_term(const Exponents& exponents, const C& coefficient) {
  if (exponents.size() != variables_.size()) throw StructuralError("term arity does not match variable set");
  if (detail::is_zero_coefficient(coefficient)) return;
  auto [it, inserted] = terms_.try_emplace(exponents, coefficient);
  if (!inserted) {
    it->second += coefficient;
    if (detail::is_zero_coefficient(it->second)) terms_.erase(it);
  }
}

template <class C>
C LaurentDifferential<C>::coefficient(const Exponents& exponents) const {
  if (exponents.size() != variables_.size()) throw StructuralError("coefficient: exponent arity mismatch");
  auto it = terms_.find(exponents);
  return it == terms_.end() ? C(0) : it->second;
}

template <class C>
std::optional<int> LaurentDifferential<C>::min_exponent(const std::string& name) const {
  const int i = index_of(name);
  if (i < 0) throw StructuralError("unknown variable '" + name + "'");
  std::optional<int> r;
  for (const auto& [e, c] : terms_)
    if (!r || e[static_cast<std::size_t>(i)] < *r) r = e[static_cast<std::size_t>(i)];
  return r;
}

template <class C>
std::optional<int> LaurentDifferential<C>::max_exponent(const std::string& name) const {
  const int i = index_of(name);
  if (i < 0) throw StructuralError("unknown variable '" + name + "'");
  std::optional<int> r;
  for (const auto& [e, c] : terms_)
    if (!r || e[static_cast<std::size_t>(i)] > *r) r = e[static_cast<std::size_t>(i)];
  return r;
}

template <class C>
void LaurentDifferential<C>::mark_expanded_pair(const std::string& a, const std::string& b) {
  if (index_of(a) < 0 || index_of(b) < 0) throw StructuralError("expanded pair names unknown variable");
  detail::merge_pairs(expanded_pairs_, {{a, b}});
}

template <class C>
LaurentDifferential<C>& LaurentDifferential<C>::operator*=(const Rational& r) {
  if (r.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= r;
  return *this;
}

template <class C>
LaurentDifferential<C>& LaurentDifferential<C>::scale(const C& factor) {
  if (detail::is_zero_coefficient(factor)) {
    terms_.clear();
    return *this;
  }
  for (auto it = terms_.begin(); it != terms_.end();) {
    it->second *= factor;
    if (detail::is_zero_coefficient(it->second)) it = terms_.erase(it);
    else ++it;
  }
  return *this;
}

template <class C>
std::string LaurentDifferential<C>::to_string() const {
  if (terms_.empty()) return "0";
  std::string differentials;
  for (const auto& v : variables_) {
    if (v.weight == 0) continue;
    differentials += " d" + v.name;
    if (v.weight != 1) differentials += "^" + std::to_string(v.weight);
  }
  std::string out;
  for (const auto& [e, c] : terms_) {
    if (!out.empty()) out += " + ";
    std::string factors;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      factors += " " + variables_[i].name;
      if (e[i] != 1) factors += "^" + std::to_string(e[i]);
    }
    factors += differentials;
    out += detail::render_coefficient(c);
    if (!factors.empty()) out += " *" + factors;
  }
  return out;
}

// Reorder `a` onto `target` (a superset of its variables); new variables get exponent 0.
// Weights of shared variables are taken from `a`; missing ones from `target`.
template <class C>
LaurentDifferential<C> align(const LaurentDifferential<C>& a, const std::vector<Variable>& target) {
  std::vector<Variable> vars = target;
  std::vector<int> where(a.arity());
  for (std::size_t i = 0; i < a.arity(); ++i) {
    int found = -1;
    for (std::size_t j = 0; j < vars.size(); ++j)
      if (vars[j].name == a.variables()[i].name) found = static_cast<int>(j);
    if (found < 0) throw StructuralError("align: variable '" + a.variables()[i].name + "' missing from target");
    vars[static_cast<std::size_t>(found)].weight = a.variables()[i].weight;
    where[i] = found;
  }
  LaurentDifferential<C> r(vars);
  r.mutable_pairs() = a.expanded_pairs();
  auto& out = r.mutable_terms();
  for (const auto& [e, c] : a.terms()) {
    Exponents x(vars.size(), 0);
    for (std::size_t i = 0; i < e.size(); ++i) x[static_cast<std::size_t>(where[i])] = e[i];
    out.emplace_hint(out.end(), std::move(x), c);
  }
  return r;
}

namespace detail {

template <class C>
bool same_names(const LaurentDifferential<C>& a, const LaurentDifferential<C>& b) {
  if (a.arity() != b.arity()) return false;
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (a.variables()[i].name != b.variables()[i].name) return false;
  return true;
}

}  // namespace detail

// In-place acc += b; variable sets and per-variable weights must agree.
template <class C>
void add_to(LaurentDifferential<C>& acc, const LaurentDifferential<C>& b) {
  const LaurentDifferential<C>* bp = &b;
  LaurentDifferential<C> aligned;
  if (!detail::same_names(acc, b)) {
    if (acc.arity() != b.arity()) throw StructuralError("add: variable sets differ");
    aligned = align(b, acc.variables());
    bp = &aligned;
  }
  for (std::size_t i = 0; i < acc.arity(); ++i)
    if (acc.variables()[i].weight != bp->variables()[i].weight)
      throw StructuralError("add: form-degree mismatch in '" + acc.variables()[i].name + "'");
  detail::merge_pairs(acc.mutable_pairs(), bp->expanded_pairs());
  for (const auto& [e, c] : bp->terms()) acc.add_term(e, c);
}

// Exact sum; variable sets and per-variable weights must agree.
template <class C>
LaurentDifferential<C> add(const LaurentDifferential<C>& a, const LaurentDifferential<C>& b) {
  LaurentDifferential<C> r = a;
  add_to(r, b);
  return r;
}

template <class C>
LaurentDifferential<C> negate(LaurentDifferential<C> a) {
  a *= Rational(-1);
  return a;
}

template <class C>
LaurentDifferential<C> subtract(const LaurentDifferential<C>& a, const LaurentDifferential<C>& b) {
  return add(a, negate(b));
}

// Exact product over the union of the variable sets; weights add per variable.
template <class C>
LaurentDifferential<C> mul(const LaurentDifferential<C>& a, const LaurentDifferential<C>& b,
                           const std::optional<Truncation>& cut = std::nullopt) {
  if (!detail::same_names(a, b)) {
    std::vector<Variable> vars = a.variables();
    for (const auto& v : b.variables())
      if (a.index_of(v.name) < 0) vars.push_back({v.name, 0});
    std::vector<Variable> vb = vars;
    for (auto& v : vb) v.weight = 0;
    std::vector<Variable> va = vb;
    return mul(align(a, va), align(b, vb), cut);
  }
  std::vector<Variable> vars = a.variables();
  for (std::size_t i = 0; i < vars.size(); ++i) vars[i].weight += b.variables()[i].weight;
  LaurentDifferential<C> r(vars);
  r.mutable_pairs() = a.expanded_pairs();
  detail::merge_pairs(r.mutable_pairs(), b.expanded_pairs());
  int cut_index = -1;
  if (cut) {
    cut_index = r.index_of(cut->variable);
    if (cut_index < 0) throw StructuralError("mul: truncation variable '" + cut->variable + "' unknown");
  }
  const std::size_t n = vars.size();
  Exponents e(n);
  // Terms are sorted lexicographically, so a cut on the leading variable ends the scan early.
  const bool sorted_cut = cut_index == 0;
  const int b_low = (sorted_cut && !b.is_zero()) ? b.terms().begin()->first[0] : 0;
  for (const auto& [ea, ca] : a.terms()) {
    if (sorted_cut && ea[0] + b_low > cut->max_exponent) break;
    for (const auto& [eb, cb] : b.terms()) {
      if (cut_index >= 0 && ea[static_cast<std::size_t>(cut_index)] + eb[static_cast<std::size_t>(cut_index)] >
                                cut->max_exponent) {
        if (sorted_cut) break;
        continue;
      }
      for (std::size_t i = 0; i < n; ++i) e[i] = ea[i] + eb[i];
      C c = ca;
      c *= cb;
      r.add_term(e, c);
    }
  }
  return r;
}

// Term-wise d/dv of the coefficient function; weights are unchanged.
template <class C>
LaurentDifferential<C> differentiate(const LaurentDifferential<C>& a, const std::string& variable) {
  const int idx = a.index_of(variable);
  if (idx < 0) throw StructuralError("differentiate: unknown variable '" + variable + "'");
  const auto i = static_cast<std::size_t>(idx);
  LaurentDifferential<C> r(a.variables());
  r.mutable_pairs() = a.expanded_pairs();
  for (const auto& [e, c] : a.terms()) {
    if (e[i] == 0) continue;
    Exponents x = e;
    x[i] -= 1;
    C v = c;
    v *= Rational(e[i]);
    r.add_term(x, v);
  }
  return r;
}

// Substitute variables: slot[i] is the index in `target` receiving variable i of `a`.
// Several variables may share a slot (their exponents and weights add). Variables of
// `target` not hit by any slot must carry weight 0 in `target` unless hit.
template <class C>
LaurentDifferential<C> embed(const LaurentDifferential<C>& a, std::vector<Variable> target,
                             const std::vector<int>& slot) {
  if (slot.size() != a.arity()) throw StructuralError("embed: slot map arity mismatch");
  for (const auto& [x, y] : a.expanded_pairs()) {
    const int ix = a.index_of(x);
    const int iy = a.index_of(y);
    if (slot[static_cast<std::size_t>(ix)] == slot[static_cast<std::size_t>(iy)])
      throw UnrenormalizedDiagonal("identifying '" + x + "' with '" + y +
                                   "' evaluates the expanded kernel on its diagonal");
  }
  for (std::size_t i = 0; i < slot.size(); ++i) {
    if (slot[i] < 0 || static_cast<std::size_t>(slot[i]) >= target.size())
      throw StructuralError("embed: slot out of range");
    target[static_cast<std::size_t>(slot[i])].weight += a.variables()[i].weight;
  }
  LaurentDifferential<C> r(std::move(target));
  for (const auto& [x, y] : a.expanded_pairs())
    r.mutable_pairs().emplace_back(r.variables()[static_cast<std::size_t>(slot[static_cast<std::size_t>(a.index_of(x))])].name,
                                   r.variables()[static_cast<std::size_t>(slot[static_cast<std::size_t>(a.index_of(y))])].name);
  Exponents x(r.arity());
  for (const auto& [e, c] : a.terms()) {
    std::fill(x.begin(), x.end(), 0);
    for (std::size_t i = 0; i < e.size(); ++i) x[static_cast<std::size_t>(slot[i])] += e[i];
    r.add_term(x, c);
  }
  return r;
}

// Rename variables; a non-injective map identifies variables as in set_equal.
template <class C>
LaurentDifferential<C> rename(const LaurentDifferential<C>& a, const std::map<std::string, std::string>& names) {
  std::vector<Variable> target;
  std::vector<int> slot;
  for (const auto& v : a.variables()) {
    auto it = names.find(v.name);
    const std::string n = it == names.end() ? v.name : it->second;
    int found = -1;
    for (std::size_t j = 0; j < target.size(); ++j)
      if (target[j].name == n) found = static_cast<int>(j);
    if (found < 0) {
      target.push_back({n, 0});
      found = static_cast<int>(target.size()) - 1;
    }
    slot.push_back(found);
  }
  return embed(a, target, slot);
}

// Identify every variable in `from` with `to`; exponents and weights add.
template <class C>
LaurentDifferential<C> set_equal(const LaurentDifferential<C>& a, const std::vector<std::string>& from,
                                 const std::string& to) {
  std::map<std::string, std::string> names;
  for (const auto& f : from) {
    if (a.index_of(f) < 0) throw StructuralError("set_equal: unknown variable '" + f + "'");
    names[f] = to;
  }
  if (a.index_of(to) >= 0 && std::find(from.begin(), from.end(), to) == from.end())
    throw StructuralError("set_equal: target '" + to + "' already present");
  return rename(a, names);
}

// Add `delta` to the differential weight of one variable.
template <class C>
LaurentDifferential<C> shift_weight(LaurentDifferential<C> a, const std::string& variable, int delta) {
  const int i = a.index_of(variable);
  if (i < 0) throw StructuralError("shift_weight: unknown variable '" + variable + "'");
  a.mutable_variables()[static_cast<std::size_t>(i)].weight += delta;
  return a;
}

// Multiply by variable^power (coefficient function only).
template <class C>
LaurentDifferential<C> shift_exponent(const LaurentDifferential<C>& a, const std::string& variable, int power) {
  const int idx = a.index_of(variable);
  if (idx < 0) throw StructuralError("shift_exponent: unknown variable '" + variable + "'");
  LaurentDifferential<C> r(a.variables());
  r.mutable_pairs() = a.expanded_pairs();
  for (const auto& [e, c] : a.terms()) {
    Exponents x = e;
    x[static_cast<std::size_t>(idx)] += power;
    r.mutable_terms().emplace(std::move(x), c);
  }
  return r;
}

// Keep only terms whose exponent in `variable` is at most `max_exponent`.
template <class C>
LaurentDifferential<C> truncate_above(const LaurentDifferential<C>& a, const std::string& variable, int max_exponent) {
  const int idx = a.index_of(variable);
  if (idx < 0) throw StructuralError("truncate_above: unknown variable '" + variable + "'");
  LaurentDifferential<C> r(a.variables());
  r.mutable_pairs() = a.expanded_pairs();
  for (const auto& [e, c] : a.terms())
    if (e[static_cast<std::size_t>(idx)] <= max_exponent) r.mutable_terms().emplace_hint(r.mutable_terms().end(), e, c);
  return r;
}

// Coefficient of v^-1 dv, with v removed. The weight of v must be exactly 1.
template <class C>
LaurentDifferential<C> residue_at_zero(const LaurentDifferential<C>& a, const std::string& variable) {
  const int idx = a.index_of(variable);
  if (idx < 0) throw StructuralError("residue: unknown variable '" + variable + "'");
  const auto i = static_cast<std::size_t>(idx);
  if (a.variables()[i].weight != 1)
    throw StructuralError("residue: d" + variable + "-weight is " + std::to_string(a.variables()[i].weight) +
                          ", expected 1");
  std::vector<Variable> vars;
  for (std::size_t j = 0; j < a.arity(); ++j)
    if (j != i) vars.push_back(a.variables()[j]);
  LaurentDifferential<C> r(vars);
  for (const auto& [x, y] : a.expanded_pairs())
    if (x != variable && y != variable) r.mutable_pairs().emplace_back(x, y);
  for (const auto& [e, c] : a.terms()) {
    if (e[i] != -1) continue;
    Exponents x;
    x.reserve(e.size() - 1);
    for (std::size_t j = 0; j < e.size(); ++j)
      if (j != i) x.push_back(e[j]);
    r.add_term(x, c);
  }
  return r;
}

// Replace every coefficient via f (e.g. evaluate a parameter).
template <class D, class C, class F>
LaurentDifferential<D> map_coefficients(const LaurentDifferential<C>& a, F f) {
  LaurentDifferential<D> r(a.variables());
  r.mutable_pairs() = a.expanded_pairs();
  for (const auto& [e, c] : a.terms()) r.add_term(e, f(c));
  return r;
}

// True iff the terms contain no non-normalized rational.
bool audit_canonical(const Laurent& a);
bool audit_canonical(const QLaurent& a);

extern template class LaurentDifferential<Rational>;
extern template class LaurentDifferential<AuxPolynomial>;

}  // namespace otr
