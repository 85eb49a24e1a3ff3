#pragma once

#include <string>
#include <vector>

#include "otr/correlator.hpp"
#include "otr/laurent.hpp"

namespace otr {

// Name of the integration variable inside residue integrands.
inline const std::string kIntegrationVariable = "w";
// Name of the kernel's free variable before it becomes z1 of the result.
inline const std::string kKernelVariable = "z0";

// Initial differentials: (0,1) -> -z^2 dz and (1/2,1) -> dz/z in variable z1.
// (0,2) is only available as an expansion; see bergman_expansion.
Laurent base_correlator(const CorrelatorKey& key);

// B(first, second) = Σ_{k=1}^{order} k first^{k-1} second^{-k-1} dfirst dsecond,
// marked as an expanded pair so identifying the two variables fails.
Laurent bergman_expansion(const std::string& first, const std::string& second, int order);

// dw^2 / (4 w^2).
Laurent tilde_w02_diagonal();

// Σ_{k=1}^{order} (sign·w)^k z0^{-(k+1)} dz0, the expanded ∫_0^{sign·w} B(z0, ζ).
Laurent expand_B_integral(int sign, int order);

// ((-1)^j ∫_0^{-w} B - ∫_0^{w} B) / (2j (-w^2 dw)^{j-1}) with B integrals expanded to `order`.
Laurent kernel(int j, int order);

// dv (-d/dv + 1/v); weight of v increases by 1.
template <class C>
LaurentDifferential<C> apply_D1(const LaurentDifferential<C>& a, const std::string& v);
// (dv^2/2)(d^2/dv^2 - (3/v) d/dv + 3/v^2); weight of v increases by 2.
template <class C>
LaurentDifferential<C> apply_D2(const LaurentDifferential<C>& a, const std::string& v);

// Sufficient w-truncation order for the kernel and B expansions.
int required_kernel_order(const CorrelatorKey& key);

struct RecursionOptions {
  int kernel_order = 0;  // 0 means required_kernel_order
  bool fused_residue = true;
};

// Quadratic and cubic integrand pieces for the target key, in variables
// w, z1..z_{n-1}. Every dependency must already be in the store.
template <class C>
LaurentDifferential<C> assemble_R2(const CorrelatorKey& key, const BasicCorrelatorStore<C>& store, int order);
template <class C>
LaurentDifferential<C> assemble_R3(const CorrelatorKey& key, const BasicCorrelatorStore<C>& store, int order);

// The bracketed integrands multiplying K^(2) and K^(3).
template <class C>
LaurentDifferential<C> integrand2(const CorrelatorKey& key, const BasicCorrelatorStore<C>& store, int order);
template <class C>
LaurentDifferential<C> integrand3(const CorrelatorKey& key, const BasicCorrelatorStore<C>& store, int order);

// Res_{w=0} kernel·integrand without forming the full product.
template <class C>
LaurentDifferential<C> residue_of_product(const Laurent& kernel_expansion, const LaurentDifferential<C>& integrand);

// One recursion step; the result has variables z1..zn. Does not publish.
template <class C>
LaurentDifferential<C> compute_correlator(const CorrelatorKey& key, const BasicCorrelatorStore<C>& store,
                                          const RecursionOptions& options = {});

// Compute and publish every stable key with measure <= budget, level by level.
// Keys already in the store are reused.
template <class C>
void compute_all(int budget, BasicCorrelatorStore<C>& store, int threads, const RecursionOptions& options = {});

// Keys the recursion step for `key` reads from the store.
std::vector<CorrelatorKey> dependencies(const CorrelatorKey& key);

}  // namespace otr
