#include "otr/specialization.hpp"

#include "otr/errors.hpp"

namespace otr {

namespace {

std::string render(const Rational& c) { return c.to_string(); }
std::string render(const AuxPolynomial& c) {
  const std::string s = c.to_string("Q");
  return c.degree() > 0 ? "(" + s + ")" : s;
}

std::string render_term(const WKBKey& k) {
  std::string out = " * hbar^" + std::to_string(k.hbar_power);
  if (k.log) return out + " log(z^2/2)";
  return out + " z^" + std::to_string(k.exponent);
}

// Rational function part only: c z^e.
template <class C>
using Series = std::map<std::pair<int, int>, C>;  // (hbar power, z exponent)

template <class C>
void accumulate(Series<C>& s, int p, int e, const C& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = s.try_emplace({p, e}, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) s.erase(it);
  }
}

// d/dx = z^{-1} d/dz
template <class C>
Series<C> ddx(const Series<C>& a) {
  Series<C> r;
  for (const auto& [k, c] : a) {
    C v = c;
    v *= Rational(k.second);
    accumulate(r, k.first, k.second - 2, v);
  }
  return r;
}

template <class C>
Series<C> times(const Series<C>& a, const Series<C>& b, int max_power) {
  Series<C> r;
  for (const auto& [ka, ca] : a)
    for (const auto& [kb, cb] : b) {
      if (ka.first + kb.first > max_power) continue;
      C v = ca;
      v *= cb;
      accumulate(r, ka.first + kb.first, ka.second + kb.second, v);
    }
  return r;
}

template <class C>
Series<C> shifted(const Series<C>& a, int power, int exponent, const C& scale) {
  Series<C> r;
  for (const auto& [k, c] : a) {
    C v = c;
    v *= scale;
    accumulate(r, k.first + power, k.second + exponent, v);
  }
  return r;
}

template <class C>
void add_into(Series<C>& acc, const Series<C>& b) {
  for (const auto& [k, c] : b) accumulate(acc, k.first, k.second, c);
}

}  // namespace

template <class C>
std::string BasicWKBSeries<C>::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [k, c] : terms_) {
    if (!out.empty()) out += " + ";
    out += render(c) + render_term(k);
  }
  return out;
}

template class BasicWKBSeries<Rational>;
template class BasicWKBSeries<AuxPolynomial>;

WKBSeries principal_specialize(const TruncatedFreeEnergy& f, int order) {
  if (order < 0) throw ContractError("hbar order must be nonnegative");
  for (int tg = 0; tg <= order + 1; ++tg)
    for (int n = 1; tg - 2 + n <= order; ++n) {
      const CorrelatorKey key{tg, n};
      if (key.stable() && !f.covers(key))
        throw ContractError("free energy does not cover " + key.to_string() + " needed for hbar order " +
                            std::to_string(order));
    }
  WKBSeries psi(order);
  for (const auto& [m, c] : f.coefficients()) {
    const auto key = *stratum_of(m);
    const int power = key.euler_level();
    if (power > order) continue;
    Rational v = c;
    int sum = 0;
    for (int k : m) {
      v /= Rational(k);
      sum += k;
    }
    psi.add_term({power, -sum, false}, v);
  }
  psi.add_term({-1, 3, false}, Rational(1, 3));
  psi.add_term({0, 0, true}, Rational(-3, 4));
  return psi;
}

namespace {

template <class C>
BasicWKBSeries<C> residual_impl(const WKBSeries& psi, const C& q, int order) {
  // Y = dΨ/dx
  Series<C> y;
  for (const auto& [k, c] : psi.terms()) {
    if (k.hbar_power > order) continue;
    if (k.log) {
      accumulate(y, k.hbar_power, -2, C(c * Rational(2)));
    } else {
      accumulate(y, k.hbar_power, k.exponent - 2, C(c * Rational(k.exponent)));
    }
  }
  const int top = order + 1;
  const Series<C> y1 = ddx(y);
  const Series<C> y2 = ddx(y1);
  // hbar^3 (Y'' + 3 Y Y' + Y^3)
  Series<C> cubic = y2;
  add_into(cubic, shifted(times(y, y1, top - 3), 0, 0, C(Rational(3))));
  add_into(cubic, times(times(y, y, top - 2), y, top - 3));
  Series<C> r = shifted(cubic, 3, 0, C(Rational(1)));
  // -2 hbar x Y = -hbar z^2 Y
  add_into(r, shifted(y, 1, 2, C(Rational(-1))));
  // 2 hbar (Q - 1)
  C constant = q;
  constant -= C(Rational(1));
  constant *= Rational(2);
  accumulate(r, 1, 0, constant);
  BasicWKBSeries<C> out(order);
  for (const auto& [k, c] : r)
    if (k.first <= top) out.add_term({k.first, k.second, false}, c);
  for (const auto& [k, c] : out.terms())
    if (k.log) throw BookkeepingError("quantum curve residual contains a logarithm");
  return out;
}

}  // namespace

QWKBSeries quantum_curve_residual(const WKBSeries& psi, int order) {
  return residual_impl<AuxPolynomial>(psi, AuxPolynomial::parameter(), order);
}

WKBSeries quantum_curve_residual(const WKBSeries& psi, const Rational& q, int order) {
  return residual_impl<Rational>(psi, q, order);
}

template <class C>
std::vector<StratumResidual> residual_by_stratum(const BasicWKBSeries<C>& residual, int order) {
  std::vector<StratumResidual> out;
  for (int m = -1; m <= order; ++m) {
    StratumResidual s;
    s.stratum = m;
    const auto part = residual.stratum(m + 1);
    s.zero = part.is_zero();
    if (!s.zero) {
      const auto& [k, c] = *part.terms().begin();
      s.leading = render(c) + render_term(k);
    }
    out.push_back(s);
  }
  return out;
}

template std::vector<StratumResidual> residual_by_stratum(const BasicWKBSeries<Rational>&, int);
template std::vector<StratumResidual> residual_by_stratum(const BasicWKBSeries<AuxPolynomial>&, int);

}  // namespace otr
