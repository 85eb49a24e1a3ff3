#include "otr/master.hpp"

#include <algorithm>

#include "otr/errors.hpp"

namespace otr {

void TSeries::add_term(int exponent, const Monomial& m, const Rational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(Key{exponent, m}, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Rational TSeries::coefficient(int exponent, const Monomial& m) const {
  auto it = terms_.find(Key{exponent, m});
  return it == terms_.end() ? Rational(0) : it->second;
}

std::string TSeries::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  const std::string dz = form_degree_ == 1 ? " dz" : " dz^" + std::to_string(form_degree_);
  for (const auto& [key, c] : terms_) {
    if (!out.empty()) out += " + ";
    out += c.to_string();
    if (!key.second.empty()) out += "*" + monomial_to_string(key.second);
    out += " * z^" + std::to_string(key.first) + dz;
  }
  return out;
}

int term_measure_thirds(int exponent, const Monomial& m, int form_degree) {
  int sum = 0;
  for (int k : m) sum += k;
  const int n = static_cast<int>(m.size());
  const int g = sum - exponent - 3 * n;
  return 2 * g + 4 * form_degree + 3 * n + 3;
}

namespace {

bool kept(int which, int e) {
  if (which == 2) return e <= -2 && e % 2 == 0;
  if (which == 3) return e <= -3 && (e % 2 != 0);
  throw ContractError("projection index must be 2 or 3");
}

class Builder {
 public:
  explicit Builder(int budget) : limit_(3 * budget) {}

  bool fits(int exponent, const Monomial& m, int f) const { return term_measure_thirds(exponent, m, f) <= limit_; }

  TSeries prune(const TSeries& a) const {
    TSeries r(a.form_degree());
    for (const auto& [key, c] : a.terms())
      if (fits(key.first, key.second, a.form_degree())) r.add_term(key.first, key.second, c);
    return r;
  }

  TSeries mul(const TSeries& a, const TSeries& b) const {
    TSeries r(a.form_degree() + b.form_degree());
    for (const auto& [ka, ca] : a.terms()) {
      const int ma = term_measure_thirds(ka.first, ka.second, a.form_degree());
      for (const auto& [kb, cb] : b.terms()) {
        // measure(AB) = measure(A) + measure(B) - 1, in thirds.
        if (ma + term_measure_thirds(kb.first, kb.second, b.form_degree()) - 3 > limit_) continue;
        r.add_term(ka.first + kb.first, monomial_product(ka.second, kb.second), ca * cb);
      }
    }
    return r;
  }

 private:
  int limit_;
};

TSeries add(const TSeries& a, const TSeries& b, const Rational& scale = Rational(1)) {
  if (a.form_degree() != b.form_degree()) throw StructuralError("TSeries: form-degree mismatch");
  TSeries r = a;
  for (const auto& [k, c] : b.terms()) r.add_term(k.first, k.second, scale * c);
  return r;
}

// Multiply by c z^shift and change the form degree.
TSeries rescale(const TSeries& a, const Rational& c, int shift, int form_delta) {
  TSeries r(a.form_degree() + form_delta);
  for (const auto& [k, v] : a.terms()) r.add_term(k.first + shift, k.second, c * v);
  return r;
}

// dz(-d/dz + 1/z)
TSeries d1(const TSeries& a) {
  TSeries r(a.form_degree() + 1);
  for (const auto& [k, v] : a.terms()) r.add_term(k.first - 1, k.second, Rational(1 - k.first) * v);
  return r;
}

// (dz^2/2)(d^2/dz^2 - (3/z) d/dz + 3/z^2)
TSeries d2(const TSeries& a) {
  TSeries r(a.form_degree() + 2);
  for (const auto& [k, v] : a.terms()) {
    const long e = k.first;
    r.add_term(k.first - 2, k.second, Rational(e * (e - 1) - 3 * e + 3, 2) * v);
  }
  return r;
}

// δ^depth F evaluated on the diagonal: Σ z^{-(k_1+1)} ... ∂_{k_1...} F dz^depth.
TSeries diagonal_derivative(const TruncatedFreeEnergy& f, int depth) {
  TSeries r(depth);
  for (const auto& [m, c] : f.coefficients()) {
    // Ordered choices of `depth` indices removed from m.
    std::vector<std::pair<Monomial, std::pair<int, Rational>>> frontier{{m, {0, c}}};
    for (int d = 0; d < depth; ++d) {
      std::vector<std::pair<Monomial, std::pair<int, Rational>>> next;
      for (const auto& [rest, acc] : frontier) {
        for (std::size_t i = 0; i < rest.size(); ++i) {
          if (i > 0 && rest[i] == rest[i - 1]) continue;
          const int k = rest[i];
          Monomial smaller = rest;
          smaller.erase(smaller.begin() + static_cast<long>(i));
          next.push_back({smaller, {acc.first - (k + 1), acc.second * Rational(multiplicity(rest, k))}});
        }
      }
      frontier = std::move(next);
    }
    for (const auto& [rest, acc] : frontier) r.add_term(acc.first, rest, acc.second);
  }
  return r;
}

}  // namespace

TSeries project(int which, const TSeries& a) {
  TSeries r(a.form_degree());
  for (const auto& [k, c] : a.terms())
    if (kept(which, k.first)) r.add_term(k.first, k.second, c);
  return r;
}

Laurent project(int which, const Laurent& a) {
  if (a.arity() != 1) throw StructuralError("projection acts on one-variable differentials");
  Laurent r(a.variables());
  for (const auto& [e, c] : a.terms())
    if (kept(which, e[0])) r.add_term(e, c);
  return r;
}

Laurent residue_form_of_projection(int which, const Laurent& a, const std::string& variable) {
  if (a.arity() != 1 || a.variables()[0].name != variable)
    throw StructuralError("residue projection expects a differential in '" + variable + "'");
  if (which != 2 && which != 3) throw ContractError("projection index must be 2 or 3");
  if (a.is_zero()) return a;
  const std::string w = variable == "w" ? "w_" : "w";
  const Laurent gamma = rename(a, {{variable, w}});
  const int top = std::max(1, -1 - *gamma.min_exponent(w));
  // 1/(z ∓ w) = Σ_{k>=0} (±w)^k z^{-k-1}.
  Laurent kernel_expansion({{variable, 0}, {w, 0}});
  for (int k = 0; k <= top; ++k) {
    const bool odd = k % 2;
    if (which == 2 && odd) kernel_expansion.add_term({-k - 1, k}, Rational(1));
    if (which == 3 && !odd && k > 0) kernel_expansion.add_term({-k - 1, k}, Rational(1));
  }
  return shift_weight(residue_at_zero(mul(kernel_expansion, gamma), w), variable, a.variables()[0].weight);
}

TSeries master_equation_residual(int which, const TruncatedFreeEnergy& f, int budget, const MasterOptions& options) {
  if (which != 2 && which != 3) throw ContractError("master equation index must be 2 or 3");
  const Builder b(budget);
  const int degree = options.t_degree > 0 ? options.t_degree : 3 * (f.max_index() + 4);

  // Ũ = δF - z^2 dz + Σ k t_k z^{k-1} dz + dz/z
  TSeries u = b.prune(diagonal_derivative(f, 1));
  u.add_term(2, {}, Rational(-1));
  for (int k = 1; k <= degree; ++k) u.add_term(k - 1, {k}, Rational(k));
  u.add_term(-1, {}, Rational(1));
  u = b.prune(u);

  // δŨ = δ²F + dz^2/(4z^2), with the diagonal of δ applied to the t-series renormalized.
  TSeries du = b.prune(diagonal_derivative(f, 2));
  du.add_term(-2, {}, Rational(1, 4));

  TSeries expr(which);
  if (which == 2) {
    expr = add(b.mul(u, u), du);
    expr = add(expr, b.prune(d1(u)));
    // Divide by 2η = -2z^2 dz.
    expr = rescale(expr, Rational(-1, 2), -2, -1);
  } else {
    const TSeries d2u = b.prune(diagonal_derivative(f, 3));
    expr = b.mul(b.mul(u, u), u);
    expr = add(expr, b.mul(u, du), Rational(3));
    expr = add(expr, d2u);
    expr = add(expr, b.prune(d2(u)), Rational(-1));
    // Divide by 3η^2 = 3z^4 dz^2.
    expr = rescale(expr, Rational(1, 3), -4, -2);
  }
  return b.prune(project(which, expr));
}

}  // namespace otr
