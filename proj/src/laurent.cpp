#include "otr/laurent.hpp"

namespace otr {

template class LaurentDifferential<Rational>;
template class LaurentDifferential<AuxPolynomial>;

bool audit_canonical(const Laurent& a) {
  for (const auto& [e, c] : a.terms())
    if (!c.is_canonical() || c.is_zero()) return false;
  return true;
}

bool audit_canonical(const QLaurent& a) {
  for (const auto& [e, c] : a.terms()) {
    if (c.is_zero()) return false;
    for (const auto& r : c.coefficients())
      if (!r.is_canonical()) return false;
    if (c.coefficients().back().is_zero()) return false;
  }
  return true;
}

}  // namespace otr
