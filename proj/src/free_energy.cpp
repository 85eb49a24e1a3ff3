#include "otr/free_energy.hpp"

#include <algorithm>

#include "otr/errors.hpp"

namespace otr {

Monomial monomial_product(const Monomial& a, const Monomial& b) {
  Monomial r;
  r.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}

std::optional<Monomial> monomial_quotient(const Monomial& whole, const Monomial& part) {
  Monomial r;
  std::size_t j = 0;
  for (std::size_t i = 0; i < whole.size(); ++i) {
    if (j < part.size() && whole[i] == part[j]) {
      ++j;
      continue;
    }
    if (j < part.size() && part[j] < whole[i]) return std::nullopt;
    r.push_back(whole[i]);
  }
  if (j != part.size()) return std::nullopt;
  return r;
}

int multiplicity(const Monomial& m, int index) { return static_cast<int>(std::count(m.begin(), m.end(), index)); }

Rational symmetry_factor(const Monomial& m) {
  Rational r(1);
  std::size_t i = 0;
  while (i < m.size()) {
    std::size_t j = i;
    while (j < m.size() && m[j] == m[i]) ++j;
    r *= factorial(static_cast<int>(j - i));
    i = j;
  }
  return r;
}

std::string monomial_to_string(const Monomial& m) {
  if (m.empty()) return "1";
  std::string out;
  std::size_t i = 0;
  while (i < m.size()) {
    std::size_t j = i;
    while (j < m.size() && m[j] == m[i]) ++j;
    if (!out.empty()) out += "*";
    out += "t" + std::to_string(m[i]);
    if (j - i > 1) out += "^" + std::to_string(j - i);
    i = j;
  }
  return out;
}

std::optional<CorrelatorKey> stratum_of(const Monomial& m) {
  if (m.empty()) return std::nullopt;
  int sum = 0;
  for (int k : m) sum += k;
  const int n = static_cast<int>(m.size());
  const int three_tg = sum - 3 * n + 6;
  if (three_tg < 0 || three_tg % 3) return std::nullopt;
  return CorrelatorKey{three_tg / 3, n};
}

namespace {

void partitions_into(int total, int parts, int min_part, Monomial& prefix, std::vector<Monomial>& out) {
  if (parts == 0) {
    if (total == 0) out.push_back(prefix);
    return;
  }
  for (int first = min_part; first * parts <= total; ++first) {
    prefix.push_back(first);
    partitions_into(total - first, parts - 1, first, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<Monomial> partitions(int total, int parts) {
  std::vector<Monomial> out;
  Monomial prefix;
  if (parts < 0 || total < 0) return out;
  partitions_into(total, parts, 1, prefix, out);
  return out;
}

void TPolynomial::add_term(const Monomial& m, const Rational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Rational TPolynomial::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

int TPolynomial::max_index() const {
  int r = 0;
  for (const auto& [m, c] : terms_)
    if (!m.empty()) r = std::max(r, m.back());
  return r;
}

std::string TPolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [m, c] : terms_) {
    if (!out.empty()) out += " + ";
    out += c.to_string();
    if (!m.empty()) out += "*" + monomial_to_string(m);
  }
  return out;
}

TPolynomial operator+(const TPolynomial& a, const TPolynomial& b) {
  TPolynomial r = a;
  for (const auto& [m, c] : b.terms()) r.add_term(m, c);
  return r;
}

TPolynomial operator-(const TPolynomial& a, const TPolynomial& b) {
  TPolynomial r = a;
  for (const auto& [m, c] : b.terms()) r.add_term(m, -c);
  return r;
}

TPolynomial operator*(const Rational& s, const TPolynomial& a) {
  TPolynomial r;
  for (const auto& [m, c] : a.terms()) r.add_term(m, s * c);
  return r;
}

TruncatedFreeEnergy::TruncatedFreeEnergy(int budget) : budget_(budget), frontier_(budget + 1) {}

TruncatedFreeEnergy TruncatedFreeEnergy::zero() {
  TruncatedFreeEnergy f(INT_MAX / 4);
  return f;
}

int TruncatedFreeEnergy::max_index() const {
  int r = 0;
  for (const auto& [m, c] : coefficients_) r = std::max(r, m.back());
  return r;
}

void TruncatedFreeEnergy::set(const Monomial& m, const Rational& c) {
  if (!std::is_sorted(m.begin(), m.end()) || (!m.empty() && m.front() < 1))
    throw StructuralError("monomial indices must be sorted and positive: " + monomial_to_string(m));
  const auto key = stratum_of(m);
  if (!key || !key->stable())
    throw BookkeepingError("monomial " + monomial_to_string(m) + " violates homogeneity");
  if (key->measure() > budget_)
    throw ContractError("monomial " + monomial_to_string(m) + " lies beyond the budget");
  if (c.is_zero()) coefficients_.erase(m);
  else coefficients_[m] = c;
}

Rational TruncatedFreeEnergy::coefficient(const Monomial& m) const {
  const auto key = stratum_of(m);
  if (!key || !key->stable()) return Rational(0);
  if (key->measure() >= frontier_)
    throw BookkeepingError("read of " + monomial_to_string(m) + " in " + key->to_string() +
                           " before it is determined");
  auto it = coefficients_.find(m);
  return it == coefficients_.end() ? Rational(0) : it->second;
}

Rational TruncatedFreeEnergy::derivative_coefficient(const Monomial& rest, const Monomial& idx) const {
  const Monomial whole = monomial_product(rest, idx);
  Rational c = coefficient(whole);
  if (c.is_zero()) return c;
  // ∂_{idx} t^{whole}: falling factorial of each multiplicity.
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    while (j < idx.size() && idx[j] == idx[i]) ++j;
    const int have = multiplicity(whole, idx[i]);
    for (int r = 0; r < static_cast<int>(j - i); ++r) c *= Rational(have - r);
    i = j;
  }
  return c;
}

std::map<CorrelatorKey, TPolynomial> TruncatedFreeEnergy::strata() const {
  std::map<CorrelatorKey, TPolynomial> out;
  for (const auto& [m, c] : coefficients_) out[*stratum_of(m)].add_term(m, c);
  return out;
}

TPolynomial TruncatedFreeEnergy::stratum(const CorrelatorKey& key) const {
  TPolynomial p;
  for (const auto& [m, c] : coefficients_)
    if (*stratum_of(m) == key) p.add_term(m, c);
  return p;
}

TruncatedFreeEnergy assemble_free_energy(const CorrelatorStore& store, int budget) {
  TruncatedFreeEnergy f(budget);
  for (const auto& key : stable_keys(budget)) {
    auto w = store.find(key);
    if (!w) throw ContractError("free energy needs " + key.to_string());
    for (const auto& [e, c] : w->terms()) {
      Monomial m;
      for (int x : e) m.push_back(-x - 1);
      if (!std::is_sorted(m.begin(), m.end())) continue;
      for (int k : m)
        if (k < 1) throw BookkeepingError(key.to_string() + " has an exponent above -2");
      f.set(m, c / symmetry_factor(m));
    }
  }
  return f;
}

Laurent correlator_from_free_energy(const TruncatedFreeEnergy& f, const CorrelatorKey& key) {
  Laurent w(correlator_variables(key.n));
  const TPolynomial stratum = f.stratum(key);
  for (const auto& [m, c] : stratum.terms()) {
    const Rational value = c * symmetry_factor(m);
    Monomial perm = m;
    do {
      Exponents e;
      for (int k : perm) e.push_back(-(k + 1));
      w.add_term(e, value);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return w;
}

}  // namespace otr
