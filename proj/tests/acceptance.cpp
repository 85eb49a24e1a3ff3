// One PASS/FAIL line per acceptance criterion, at budget 8 and hbar order 2.
#include <filesystem>
#include <functional>
#include <iostream>
#include <string>

#include <unistd.h>

#include "otr/constraints.hpp"
#include "otr/engine.hpp"
#include "otr/master.hpp"
#include "otr/numbers.hpp"
#include "otr/qrefine.hpp"
#include "otr/recursion.hpp"
#include "otr/specialization.hpp"

using namespace otr;

namespace {

constexpr int kBudget = 8;
constexpr int kOrder = 2;

struct Context {
  CorrelatorStore store;
  QCorrelatorStore q_store;
  TruncatedFreeEnergy oracle = solve_F(kBudget);
  TruncatedFreeEnergy assembled;
  Context() {
    compute_all(kBudget, store, 4);
    compute_q_correlators(kBudget, q_store, 4);
    assembled = assemble_free_energy(store, kBudget);
  }
};

// Each criterion returns an empty string on success, else the first failure.
using Criterion = std::function<std::string(const Context&)>;

std::string dual(const Context& c) {
  for (const auto& key : stable_keys(kBudget))
    if (!(*c.store.find(key) == correlator_from_free_energy(c.oracle, key)))
      return key.to_string() + " differs from the oracle";
  if (!(c.assembled == c.oracle)) return "assembled free energy differs from the oracle";
  return {};
}

std::string symmetry(const Context& c) {
  for (const auto& key : stable_keys(kBudget)) {
    const auto report = symmetry_report(key, *c.store.find(key));
    if (!report.symmetric()) return report.to_string();
  }
  return {};
}

std::string constraints(const Context& c) {
  for (int k = 0; k <= 4; ++k) {
    if (!apply_Lhat(k, c.assembled).is_zero()) return "Lhat_" + std::to_string(k) + " residual is nonzero";
    if (!apply_Mhat(k, c.assembled).is_zero()) return "Mhat_" + std::to_string(k) + " residual is nonzero";
  }
  const auto zero = TruncatedFreeEnergy::zero();
  if (act_on_exp(Lhat(0), zero, {}) != Rational(13, 8)) return "Lhat_0 sentinel is not 13/8";
  if (act_on_exp(Mhat(0), zero, {}) != Rational(3, 4)) return "Mhat_0 sentinel is not 3/4";
  return {};
}

std::string master(const Context& c) {
  for (int which : {2, 3}) {
    const auto residual = master_equation_residual(which, c.assembled, kBudget);
    if (!residual.is_zero()) return "master equation " + std::to_string(which) + ": " + residual.to_string();
  }
  return {};
}

std::string homogeneity(const Context& c) {
  for (const auto& key : stable_keys(kBudget))
    for (const auto& [e, coeff] : c.store.find(key)->terms()) {
      int total = 0;
      for (int x : e) total -= x;
      if (total != key.pole_total()) return key.to_string() + " has pole total " + std::to_string(total);
    }
  for (const auto* f : {&c.oracle, &c.assembled})
    for (const auto& [m, coeff] : f->coefficients()) {
      int total = 0;
      for (int k : m) total += k;
      const int three_h = total + 6 - 3 * static_cast<int>(m.size());
      if (three_h < 0 || three_h % 3 != 0) return "F monomial " + monomial_to_string(m) + " is not homogeneous";
    }
  return {};
}

std::string anchored(const Context& c) {
  const IntersectionIndex tau0_cubed{0, {0, 0, 0}, {}};
  if (extract_number(tau0_cubed, c.store, kBudget).value != Rational(1)) return "<tau_0^3>_0 from the recursion";
  if (extract_number(tau0_cubed, c.oracle).value != Rational(1)) return "<tau_0^3>_0 from the oracle";
  // Closed sector of h = 1: the Q^0 part of the graded W_{1,1}, normalized by T_1 = 3 t_3.
  const IntersectionIndex tau1{2, {1}, {}};
  const Rational closed =
      c.q_store.find(tau1.key())->coefficient({-4}).coefficient(0) / interior_normalization(1);
  if (closed != Rational(1, 24)) return "closed <tau_1>_1 is " + closed.to_string();
  const IntersectionIndex sigma0_cubed{1, {}, {0, 0, 0}};
  if (extract_number(sigma0_cubed, c.store, kBudget).value != Rational(1)) return "<sigma_0^3>_1/2 from the recursion";
  if (extract_number(sigma0_cubed, c.oracle).value != Rational(1)) return "<sigma_0^3>_1/2 from the oracle";
  return {};
}

std::string quantum_curve(const Context& c) {
  const auto psi = principal_specialize(c.assembled, kOrder);
  const auto residual = quantum_curve_residual(psi, Rational(1), kOrder);
  for (const auto& s : residual_by_stratum(residual, kOrder))
    if (!s.zero) return "stratum " + std::to_string(s.stratum) + ": " + s.leading;
  if (residual_by_stratum(residual, kOrder).size() != 4) return "strata -1..2 not all reported";
  const auto symbolic = quantum_curve_residual(psi, kOrder);
  if (!symbolic.stratum(0).is_zero()) return "y^3 - 2xy residual " + symbolic.stratum(0).to_string();
  TruncatedFreeEnergy mutated = c.assembled;
  mutated.set({1, 1, 1}, c.assembled.coefficient({1, 1, 1}) + Rational(1));
  if (quantum_curve_residual(principal_specialize(mutated, kOrder), Rational(1), kOrder).is_zero())
    return "mutated free energy passes";
  return {};
}

std::string q_refinement(const Context& c) {
  bool witnessed = false;
  for (const auto& key : stable_keys(kBudget)) {
    const auto audit = audit_q_correlator(key, *c.q_store.find(key), *c.store.find(key));
    if (!audit.ok()) return audit.first_failure;
    const auto report = symmetry_report(key, *c.q_store.find(key));
    if (!report.symmetric() && key.euler_level() >= 3) witnessed = true;
  }
  return witnessed ? std::string() : std::string("no asymmetry witness");
}

std::string determinism(const Context&) {
  const auto dir = std::filesystem::temp_directory_path() / ("otr-acceptance-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::string failure;
  for (const auto format : {OutputFormat::Json, OutputFormat::Csv, OutputFormat::Text}) {
    RunConfig cached;
    cached.budget = kBudget;
    cached.format = format;
    cached.cache_dir = dir.string();
    cached.threads = 4;
    RunConfig sequential;
    sequential.budget = kBudget;
    sequential.format = format;
    sequential.threads = 1;
    for (const char* what : {"correlators", "table"}) {
      const auto cold = Engine(cached).export_data(what);
      const auto warm = Engine(cached).export_data(what);
      const auto plain = Engine(sequential).export_data(what);
      if (cold != warm) failure = std::string(what) + ": warm cache output differs";
      if (cold != plain) failure = std::string(what) + ": parallel output differs from sequential";
    }
  }
  std::filesystem::remove_all(dir);
  return failure;
}

}  // namespace

int main() {
  const Context context;
  const std::vector<std::pair<std::string, Criterion>> criteria = {
      {"dual-pipeline equivalence", dual},
      {"permutation symmetry", symmetry},
      {"constraint annihilation and sentinels", constraints},
      {"master equations", master},
      {"homogeneity", homogeneity},
      {"anchored values", anchored},
      {"quantum curve", quantum_curve},
      {"Q-refinement structure", q_refinement},
      {"determinism and caching", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    std::string failure;
    try {
      failure = criteria[i].second(context);
    } catch (const std::exception& e) {
      failure = std::string("exception: ") + e.what();
    }
    std::cout << (failure.empty() ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first;
    if (!failure.empty()) {
      std::cout << " (" << failure << ")";
      ++failed;
    }
    std::cout << "\n";
  }
  return failed == 0 ? 0 : 1;
}
