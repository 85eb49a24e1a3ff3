#include "otr/correlator.hpp"

#include <algorithm>
#include <stdexcept>

namespace otr {

bool CorrelatorKey::is_base() const {
  return (twice_genus == 0 && n == 1) || (twice_genus == 1 && n == 1) || (twice_genus == 0 && n == 2);
}

std::string CorrelatorKey::genus_string() const {
  if (twice_genus % 2 == 0) return std::to_string(twice_genus / 2);
  return std::to_string(twice_genus) + "/2";
}

std::string CorrelatorKey::to_string() const { return "W_{" + genus_string() + "," + std::to_string(n) + "}"; }

CorrelatorKey CorrelatorKey::parse(const std::string& genus, int n) {
  Rational g;
  try {
    g = Rational::parse(genus);
  } catch (const std::exception&) {
    throw ContractError("genus must be an integer or p/2, got '" + genus + "'");
  }
  const Rational twice = g * Rational(2);
  if (!twice.is_integer() || twice.sign() < 0) throw ContractError("genus must be a nonnegative multiple of 1/2");
  if (n < 1) throw ContractError("n must be positive");
  return {static_cast<int>(twice.numerator().get_si()), n};
}

std::vector<CorrelatorKey> stable_keys(int budget) {
  std::vector<CorrelatorKey> keys;
  for (int tg = 0; 2 * tg + 1 <= budget; ++tg)
    for (int n = 1; 2 * tg + n <= budget; ++n) {
      CorrelatorKey k{tg, n};
      if (k.stable()) keys.push_back(k);
    }
  std::sort(keys.begin(), keys.end(), [](const CorrelatorKey& a, const CorrelatorKey& b) {
    if (a.measure() != b.measure()) return a.measure() < b.measure();
    return a < b;
  });
  return keys;
}

std::vector<Variable> correlator_variables(int n) {
  std::vector<Variable> v;
  for (int i = 1; i <= n; ++i) v.push_back({"z" + std::to_string(i), 1});
  return v;
}

}  // namespace otr
