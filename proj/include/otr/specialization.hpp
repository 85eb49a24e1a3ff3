#pragma once

#include <compare>
#include <map>
#include <string>
#include <vector>

#include "otr/aux_polynomial.hpp"
#include "otr/free_energy.hpp"

namespace otr {

// Term c · hbar^power · z^exponent, or c · hbar^power · log(z^2/2) when `log` is set.
struct WKBKey {
  int hbar_power = 0;
  int exponent = 0;
  bool log = false;
  friend auto operator<=>(const WKBKey&, const WKBKey&) = default;
};

template <class C>
class BasicWKBSeries {
 public:
  BasicWKBSeries() = default;
  explicit BasicWKBSeries(int order) : order_(order) {}

  int order() const { return order_; }
  const std::map<WKBKey, C>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const WKBKey& key, const C& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(key, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  C coefficient(const WKBKey& key) const {
    auto it = terms_.find(key);
    return it == terms_.end() ? C(0) : it->second;
  }

  // Terms at one power of hbar.
  BasicWKBSeries stratum(int hbar_power) const {
    BasicWKBSeries r(order_);
    for (const auto& [k, c] : terms_)
      if (k.hbar_power == hbar_power) r.terms_.emplace(k, c);
    return r;
  }

  std::string to_string() const;

 private:
  int order_ = 0;
  std::map<WKBKey, C> terms_;
};

using WKBSeries = BasicWKBSeries<Rational>;
using QWKBSeries = BasicWKBSeries<AuxPolynomial>;

// How the unstable strata enter Ψ.
inline const std::string kUnstableDecomposition =
    "unstable strata (0,1), (0,2), (1/2,1) replaced by z^3/(3 hbar) - 3/4 log(z^2/2)";

// Ψ = Σ_{stable} hbar^{2h-2+n} z^{-Σk} ∏ 1/k_i · coeff  +  z^3/(3 hbar) - ¾ log(z^2/2),
// through hbar^order. F must cover every stable stratum with 2h - 2 + n <= order.
WKBSeries principal_specialize(const TruncatedFreeEnergy& f, int order);

// e^{-Ψ}(hbar^3 d^3/dx^3 - 2 hbar x d/dx + 2 hbar (Q - 1)) e^{Ψ} with x = z^2/2, Q symbolic.
// The stratum m of Ψ is tested by the coefficient of hbar^{m+1}; powers up to order + 1 are kept.
QWKBSeries quantum_curve_residual(const WKBSeries& psi, int order);
WKBSeries quantum_curve_residual(const WKBSeries& psi, const Rational& q, int order);

struct StratumResidual {
  int stratum = 0;  // m, tested at hbar^{m+1}
  bool zero = true;
  std::string leading;  // lowest nonzero term, empty when zero
};

template <class C>
std::vector<StratumResidual> residual_by_stratum(const BasicWKBSeries<C>& residual, int order);

}  // namespace otr
