#pragma once

#include <string>
#include <vector>

#include "otr/free_energy.hpp"

namespace otr {

enum class ModeKind { Identity, J, L, M };

// coefficient · (1 | J_index | L_index | M_index).
struct ModePiece {
  ModeKind kind = ModeKind::Identity;
  int index = 0;
  Rational coefficient;
};

// Finite linear combination of current modes and their normal-ordered quadratic and cubic sums,
// at u = 1. J_k = ∂/∂t_k (k > 0), J_0 = 0, J_{-a} = a t_a.
struct ModeOperator {
  std::string name;
  std::vector<ModePiece> pieces;
};

ModeOperator current_mode(int k);
// ½ Σ_{a+b=k} :J_a J_b:
ModeOperator virasoro_mode(int k);
// ⅓ Σ_{a+b+c=k} :J_a J_b J_c:
ModeOperator w3_mode(int k);

// L_{2k} + (k+2) J_{2k} + 13/8 δ_{k,0} - J_{2k+3}
ModeOperator Lhat(int k);
// -M_{2k} + 2(L_{2k+3} - L_{2k}) + 2J_{2k+3} + (2k²/3 + 2k + 1/12) J_{2k} + ¾ δ_{k,0} - J_{2k+6}
ModeOperator Mhat(int k);
// M_{2k} + 2(k+3)L_{2k} - 2L_{2k+3} - 2(k+3)J_{2k+3} + (95/12 + 6k + 4k²/3) J_{2k} + 23/4 δ_{k,0} + J_{2k+6}
ModeOperator MhatOpen(int k);

ModeOperator operator+(const ModeOperator& a, const ModeOperator& b);
ModeOperator operator*(const Rational& c, const ModeOperator& a);

// Index of the leading current: 2k+3 for Lhat(k), 2k+6 for Mhat(k).
int leading_index_L(int k);
int leading_index_M(int k);

// Coefficient of t^N in (Op e^F) / e^F. Every nonzero contribution is audited against the
// u-grading: its net u-power (in thirds) must equal ΣN - 3|N|; a mismatch throws BookkeepingError.
Rational act_on_exp(const ModeOperator& op, const TruncatedFreeEnergy& f, const Monomial& n);

// Coefficient of t^N in J_k e^F / e^F.
Rational apply_J(int k, const TruncatedFreeEnergy& f, const Monomial& n);

// Plain action on a polynomial (no exponential).
TPolynomial act_on_poly(const ModeOperator& op, const TPolynomial& p);

// Monomials N with N ∪ {leading} inside the budget.
std::vector<Monomial> constraint_monomials(int leading, int budget);

// Residual (Op e^F)/e^F on every monomial N with N ∪ {leading} inside the budget.
// Returns only the nonzero coefficients.
TPolynomial constraint_residual(const ModeOperator& op, int leading, const TruncatedFreeEnergy& f, int budget);
TPolynomial apply_Lhat(int k, const TruncatedFreeEnergy& f);
TPolynomial apply_Mhat(int k, const TruncatedFreeEnergy& f);

// Largest t-index of any monomial in a stable stratum with measure <= budget.
int degree_bound(int budget);

// Order-by-order solution of the constraints: each coefficient of F is forced by the
// operator whose leading current hits one of its indices; every index gives an equation and
// all must agree.
TruncatedFreeEnergy solve_F(int budget);

}  // namespace otr
