#include "otr/constraints.hpp"

#include <algorithm>
#include <map>

#include "otr/errors.hpp"

namespace otr {

namespace {

ModeOperator single(const std::string& name, ModeKind kind, int index, const Rational& c) {
  return {name, {{kind, index, c}}};
}

ModeOperator identity(const Rational& c) { return single("1", ModeKind::Identity, 0, c); }

// Distinct values of a sorted monomial.
std::vector<int> distinct(const Monomial& m) {
  std::vector<int> r;
  for (int k : m)
    if (r.empty() || r.back() != k) r.push_back(k);
  return r;
}

int thirds_shift(int mode) { return mode > 0 ? 3 - mode : -mode - 3; }

int thirds_of(const Monomial& m) {
  int s = 0;
  for (int k : m) s += k;
  return s - 3 * static_cast<int>(m.size());
}

// All sub-multisets of m.
std::vector<Monomial> sub_multisets(const Monomial& m) {
  std::vector<std::pair<int, int>> counts;
  for (int k : m) {
    if (counts.empty() || counts.back().first != k) counts.emplace_back(k, 0);
    ++counts.back().second;
  }
  std::vector<Monomial> out{{}};
  for (const auto& [value, count] : counts) {
    std::vector<Monomial> next;
    for (const auto& prefix : out)
      for (int c = 0; c <= count; ++c) {
        Monomial x = prefix;
        x.insert(x.end(), static_cast<std::size_t>(c), value);
        next.push_back(std::move(x));
      }
    out = std::move(next);
  }
  return out;
}

// Set partitions of a small list.
void set_partitions(const std::vector<int>& items, std::size_t at, std::vector<std::vector<int>>& current,
                    std::vector<std::vector<std::vector<int>>>& out) {
  if (at == items.size()) {
    out.push_back(current);
    return;
  }
  for (std::size_t b = 0; b < current.size(); ++b) {
    current[b].push_back(items[at]);
    set_partitions(items, at + 1, current, out);
    current[b].pop_back();
  }
  current.push_back({items[at]});
  set_partitions(items, at + 1, current, out);
  current.pop_back();
}

class ExpAction {
 public:
  ExpAction(const TruncatedFreeEnergy& f, const Monomial& n) : f_(f), n_(n), expected_(thirds_of(n)) {}

  // Coefficient of t^N in :J_{modes}: e^F / e^F.
  Rational term(const std::vector<int>& modes) const {
    Monomial creation;
    Monomial annihilation;
    int shift = 0;
    Rational factor(1);
    for (int x : modes) {
      if (x == 0) return Rational(0);
      shift += thirds_shift(x);
      if (x < 0) {
        creation.push_back(-x);
        factor *= Rational(-x);
      } else {
        annihilation.push_back(x);
      }
    }
    std::sort(creation.begin(), creation.end());
    std::sort(annihilation.begin(), annihilation.end());
    auto rest = monomial_quotient(n_, creation);
    if (!rest) return Rational(0);
    if (annihilation.empty()) {
      if (!rest->empty()) return Rational(0);
      audit(shift);
      return factor;
    }
    std::vector<std::vector<std::vector<int>>> parts;
    std::vector<std::vector<int>> current;
    set_partitions(annihilation, 0, current, parts);
    Rational total(0);
    for (const auto& blocks : parts) {
      std::vector<Monomial> sorted_blocks;
      for (auto b : blocks) {
        std::sort(b.begin(), b.end());
        sorted_blocks.push_back(b);
      }
      total += product(*rest, sorted_blocks, shift);
    }
    return factor * total;
  }

 private:
  // Coefficient of t^rest in ∏ ∂_{blocks[i]} F. Each assignment of rest to the blocks is
  // validated as a whole before any coefficient is read, so no undetermined stratum is touched.
  Rational product(const Monomial& rest, const std::vector<Monomial>& blocks, int thirds) const {
    std::vector<Monomial> parts;
    return assign(rest, blocks, 0, parts, thirds);
  }

  Rational assign(const Monomial& rest, const std::vector<Monomial>& blocks, std::size_t at,
                  std::vector<Monomial>& parts, int thirds) const {
    if (at + 1 == blocks.size()) {
      parts.push_back(rest);
      Rational r = evaluate(blocks, parts, thirds);
      parts.pop_back();
      return r;
    }
    Rational total(0);
    for (const auto& a : sub_multisets(rest)) {
      parts.push_back(a);
      total += assign(*monomial_quotient(rest, a), blocks, at + 1, parts, thirds);
      parts.pop_back();
    }
    return total;
  }

  Rational evaluate(const std::vector<Monomial>& blocks, const std::vector<Monomial>& parts, int thirds) const {
    for (std::size_t i = 0; i < parts.size(); ++i) {
      const auto key = stratum_of(monomial_product(parts[i], blocks[i]));
      if (!key || !key->stable()) return Rational(0);
    }
    Rational c(1);
    for (std::size_t i = 0; i < parts.size(); ++i) {
      c *= f_.derivative_coefficient(parts[i], blocks[i]);
      if (c.is_zero()) return c;
      thirds += block_thirds(parts[i], blocks[i]);
    }
    audit(thirds);
    return c;
  }

  static int block_thirds(const Monomial& a, const Monomial& block) {
    const auto key = stratum_of(monomial_product(a, block));
    return 3 * (key->twice_genus - 2);
  }

  void audit(int thirds) const {
    if (thirds != expected_)
      throw BookkeepingError("u-grading mismatch at " + monomial_to_string(n_) + ": term carries u^(" +
                             std::to_string(thirds) + "/3), expected u^(" + std::to_string(expected_) + "/3)");
  }

  const TruncatedFreeEnergy& f_;
  const Monomial& n_;
  int expected_;
};

// Candidate nonzero modes when acting at N: creators of indices present in N,
// annihilators up to `top`.
std::vector<int> candidates(const Monomial& n, int top) {
  std::vector<int> r;
  for (int c : distinct(n)) r.push_back(-c);
  for (int a = 1; a <= top; ++a) r.push_back(a);
  return r;
}

bool is_candidate(int x, const Monomial& n, int top) {
  if (x > 0) return x <= top;
  if (x < 0) return std::binary_search(n.begin(), n.end(), -x);
  return false;
}

}  // namespace

ModeOperator current_mode(int k) { return single("J" + std::to_string(k), ModeKind::J, k, Rational(1)); }
ModeOperator virasoro_mode(int k) { return single("L" + std::to_string(k), ModeKind::L, k, Rational(1)); }
ModeOperator w3_mode(int k) { return single("M" + std::to_string(k), ModeKind::M, k, Rational(1)); }

ModeOperator operator+(const ModeOperator& a, const ModeOperator& b) {
  ModeOperator r = a;
  r.pieces.insert(r.pieces.end(), b.pieces.begin(), b.pieces.end());
  return r;
}

ModeOperator operator*(const Rational& c, const ModeOperator& a) {
  ModeOperator r = a;
  for (auto& p : r.pieces) p.coefficient *= c;
  return r;
}

ModeOperator Lhat(int k) {
  ModeOperator r = virasoro_mode(2 * k) + Rational(k + 2) * current_mode(2 * k) +
                   Rational(-1) * current_mode(2 * k + 3);
  if (k == 0) r = r + identity(Rational(13, 8));
  r.name = "Lhat_" + std::to_string(k);
  return r;
}

ModeOperator Mhat(int k) {
  const Rational jk = Rational(2 * k * k, 3) + Rational(2 * k) + Rational(1, 12);
  ModeOperator r = Rational(-1) * w3_mode(2 * k) + Rational(2) * virasoro_mode(2 * k + 3) +
                   Rational(-2) * virasoro_mode(2 * k) + Rational(2) * current_mode(2 * k + 3) +
                   jk * current_mode(2 * k) + Rational(-1) * current_mode(2 * k + 6);
  if (k == 0) r = r + identity(Rational(3, 4));
  r.name = "Mhat_" + std::to_string(k);
  return r;
}

ModeOperator MhatOpen(int k) {
  const Rational jk = Rational(95, 12) + Rational(6 * k) + Rational(4 * k * k, 3);
  ModeOperator r = w3_mode(2 * k) + Rational(2 * (k + 3)) * virasoro_mode(2 * k) +
                   Rational(-2) * virasoro_mode(2 * k + 3) + Rational(-2 * (k + 3)) * current_mode(2 * k + 3) +
                   jk * current_mode(2 * k) + current_mode(2 * k + 6);
  if (k == 0) r = r + identity(Rational(23, 4));
  r.name = "MhatOpen_" + std::to_string(k);
  return r;
}

int leading_index_L(int k) { return 2 * k + 3; }
int leading_index_M(int k) { return 2 * k + 6; }

Rational act_on_exp(const ModeOperator& op, const TruncatedFreeEnergy& f, const Monomial& n) {
  const ExpAction action(f, n);
  const int top = f.max_index();
  const auto cand = candidates(n, top);
  Rational total(0);
  for (const auto& piece : op.pieces) {
    if (piece.coefficient.is_zero()) continue;
    Rational value(0);
    switch (piece.kind) {
      case ModeKind::Identity:
        value = n.empty() ? Rational(1) : Rational(0);
        break;
      case ModeKind::J:
        value = action.term({piece.index});
        break;
      case ModeKind::L:
        for (int a : cand) {
          const int b = piece.index - a;
          if (is_candidate(b, n, top)) value += action.term({a, b});
        }
        value *= Rational(1, 2);
        break;
      case ModeKind::M:
        for (int a : cand)
          for (int b : cand) {
            const int c = piece.index - a - b;
            if (is_candidate(c, n, top)) value += action.term({a, b, c});
          }
        value *= Rational(1, 3);
        break;
    }
    total += piece.coefficient * value;
  }
  return total;
}

Rational apply_J(int k, const TruncatedFreeEnergy& f, const Monomial& n) {
  return act_on_exp(current_mode(k), f, n);
}

namespace {

// :∏ J_modes: applied to p, annihilators first.
TPolynomial normal_ordered_on_poly(const std::vector<int>& modes, const TPolynomial& p) {
  Monomial creation;
  Monomial annihilation;
  Rational factor(1);
  for (int x : modes) {
    if (x == 0) return {};
    if (x < 0) {
      creation.push_back(-x);
      factor *= Rational(-x);
    } else {
      annihilation.push_back(x);
    }
  }
  std::sort(creation.begin(), creation.end());
  std::sort(annihilation.begin(), annihilation.end());
  TPolynomial r;
  for (const auto& [m, c] : p.terms()) {
    auto rest = monomial_quotient(m, annihilation);
    if (!rest) continue;
    Rational d = c * factor;
    std::size_t i = 0;
    while (i < annihilation.size()) {
      std::size_t j = i;
      while (j < annihilation.size() && annihilation[j] == annihilation[i]) ++j;
      const int have = multiplicity(m, annihilation[i]);
      for (int s = 0; s < static_cast<int>(j - i); ++s) d *= Rational(have - s);
      i = j;
    }
    r.add_term(monomial_product(*rest, creation), d);
  }
  return r;
}

}  // namespace

TPolynomial act_on_poly(const ModeOperator& op, const TPolynomial& p) {
  const int top = p.max_index();
  TPolynomial total;
  for (const auto& piece : op.pieces) {
    // Two annihilators can push the third mode down to index - 2·top.
    const int span = 2 * top + std::abs(piece.index) + 2;
    TPolynomial value;
    switch (piece.kind) {
      case ModeKind::Identity:
        value = p;
        break;
      case ModeKind::J:
        value = normal_ordered_on_poly({piece.index}, p);
        break;
      case ModeKind::L:
        for (int a = -span; a <= span; ++a) {
          const int b = piece.index - a;
          if (a == 0 || b == 0 || b > top || a > top) continue;
          value = value + Rational(1, 2) * normal_ordered_on_poly({a, b}, p);
        }
        break;
      case ModeKind::M:
        for (int a = -span; a <= span; ++a)
          for (int b = -span; b <= span; ++b) {
            const int c = piece.index - a - b;
            if (a == 0 || b == 0 || c == 0 || a > top || b > top || c > top) continue;
            value = value + Rational(1, 3) * normal_ordered_on_poly({a, b, c}, p);
          }
        break;
    }
    total = total + piece.coefficient * value;
  }
  return total;
}

std::vector<Monomial> constraint_monomials(int leading, int budget) {
  std::vector<Monomial> out;
  // N ∪ {leading} needs 3h = ΣN + leading - 3(n+1) + 6 >= 0 and 2h + n + 1 <= budget.
  for (int n = 0; n + 1 <= budget; ++n) {
    const int sum_min = std::max(n, 3 * (n + 1) - 6 - leading);
    const int twice_limit = 3 * (budget - n - 1) - 2 * (leading - 3 * (n + 1) + 6);
    if (twice_limit < 0) continue;
    const int sum_max = twice_limit / 2;
    for (int s = sum_min; s <= sum_max; ++s)
      for (auto& m : partitions(s, n)) out.push_back(std::move(m));
  }
  return out;
}

TPolynomial constraint_residual(const ModeOperator& op, int leading, const TruncatedFreeEnergy& f, int budget) {
  TPolynomial out;
  for (const auto& m : constraint_monomials(leading, budget)) out.add_term(m, act_on_exp(op, f, m));
  return out;
}

TPolynomial apply_Lhat(int k, const TruncatedFreeEnergy& f) {
  return constraint_residual(Lhat(k), leading_index_L(k), f, f.budget());
}

TPolynomial apply_Mhat(int k, const TruncatedFreeEnergy& f) {
  return constraint_residual(Mhat(k), leading_index_M(k), f, f.budget());
}

int degree_bound(int budget) {
  int d = 0;
  for (const auto& key : stable_keys(budget)) d = std::max(d, key.index_total() - (key.n - 1));
  return d;
}

TruncatedFreeEnergy solve_F(int budget) {
  TruncatedFreeEnergy f(budget);
  const auto keys = stable_keys(budget);
  std::map<int, std::vector<CorrelatorKey>> levels;
  for (const auto& k : keys) levels[k.measure()].push_back(k);
  for (const auto& [measure, level] : levels) {
    f.set_frontier(measure);
    for (const auto& key : level) {
      for (const auto& m : partitions(key.index_total(), key.n)) {
        std::optional<Rational> forced;
        int forced_by = 0;
        for (int j : distinct(m)) {
          const Monomial rest = *monomial_quotient(m, {j});
          ModeOperator op = (j % 2) ? Lhat((j - 3) / 2) : Mhat((j - 6) / 2);
          // Drop the leading -J_j; what remains must equal J_j F at this monomial.
          op.pieces.erase(std::remove_if(op.pieces.begin(), op.pieces.end(),
                                         [j](const ModePiece& p) {
                                           return p.kind == ModeKind::J && p.index == j &&
                                                  p.coefficient == Rational(-1);
                                         }),
                          op.pieces.end());
          const Rational value = act_on_exp(op, f, rest) / Rational(multiplicity(m, j));
          if (!forced) {
            forced = value;
            forced_by = j;
          } else if (*forced != value) {
            throw InconsistencyError("coefficient of " + monomial_to_string(m) + " forced to " +
                                     forced->to_string() + " via t" + std::to_string(forced_by) + " and to " +
                                     value.to_string() + " via t" + std::to_string(j));
          }
        }
        f.set(m, *forced);
      }
    }
  }
  f.set_frontier(budget + 1);
  return f;
}

}  // namespace otr
