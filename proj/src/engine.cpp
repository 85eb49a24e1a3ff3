#include "otr/engine.hpp"

#include <json.hpp>

#include "otr/cache.hpp"
#include "otr/constraints.hpp"
#include "otr/errors.hpp"
#include "otr/master.hpp"
#include "otr/qrefine.hpp"
#include "otr/recursion.hpp"
#include "otr/specialization.hpp"

namespace otr {

using nlohmann::ordered_json;

OutputFormat parse_format(const std::string& s) {
  if (s == "text") return OutputFormat::Text;
  if (s == "json") return OutputFormat::Json;
  if (s == "csv") return OutputFormat::Csv;
  throw ContractError("unknown format '" + s + "' (expected json, csv or text)");
}

QMode parse_q_mode(const std::string& s, Rational* value) {
  if (s.empty() || s == "off") return QMode::Off;
  if (s == "symbolic") return QMode::Symbolic;
  Rational q;
  try {
    q = Rational::parse(s);
  } catch (const std::exception&) {
    throw ContractError("unknown Q mode '" + s + "' (expected off, symbolic or p/q)");
  }
  if (value) *value = q;
  return QMode::Value;
}

std::string CheckReport::to_string() const {
  std::string out;
  for (const auto& line : lines) out += line + "\n";
  if (!passed && !counterexample.empty()) out += "counterexample: " + counterexample + "\n";
  out += suite + ": " + (passed ? "PASS" : "FAIL") + "\n";
  return out;
}

const std::vector<std::string>& check_suites() {
  static const std::vector<std::string> suites = {"constraints", "master",     "dual",        "quantum-curve",
                                                  "q-symmetry",  "symmetry",   "homogeneity", "all"};
  return suites;
}

struct Engine::State {
  std::unique_ptr<CorrelatorStore> store;
  std::unique_ptr<QCorrelatorStore> q_store;
  std::optional<TruncatedFreeEnergy> oracle;
  std::optional<TruncatedFreeEnergy> recursion_f;
};

Engine::Engine(RunConfig config) : config_(std::move(config)), state_(std::make_unique<State>()) {
  if (config_.budget < 0) throw ContractError("budget must be nonnegative");
  if (config_.threads < 1) throw ContractError("threads must be at least 1");
  if (config_.hbar_order < 0) throw ContractError("hbar order must be nonnegative");
}

Engine::~Engine() = default;

const CorrelatorStore& Engine::correlators() {
  if (state_->store) return *state_->store;
  auto store = std::make_unique<CorrelatorStore>();
  const std::string dir = resolve_cache_dir(config_.cache_dir);
  std::optional<CorrelatorCache> cache;
  std::vector<CorrelatorKey> missing;
  if (!dir.empty()) {
    cache.emplace(dir);
    for (const auto& key : stable_keys(config_.budget)) {
      std::optional<Laurent> hit;
      try {
        hit = cache->load(key);
      } catch (const IoError&) {
        // A damaged record is recomputed and overwritten.
      }
      if (hit)
        store->publish(key, std::move(*hit));
      else
        missing.push_back(key);
    }
  }
  compute_all(config_.budget, *store, config_.threads);
  if (cache)
    for (const auto& key : missing) cache->save(key, *store->find(key));
  state_->store = std::move(store);
  return *state_->store;
}

const QCorrelatorStore& Engine::q_correlators() {
  if (!state_->q_store) {
    auto store = std::make_unique<QCorrelatorStore>();
    compute_q_correlators(config_.budget, *store, config_.threads);
    state_->q_store = std::move(store);
  }
  return *state_->q_store;
}

const TruncatedFreeEnergy& Engine::oracle() {
  if (!state_->oracle) state_->oracle = solve_F(config_.budget);
  return *state_->oracle;
}

const TruncatedFreeEnergy& Engine::recursion_free_energy() {
  if (!state_->recursion_f) state_->recursion_f = assemble_free_energy(correlators(), config_.budget);
  return *state_->recursion_f;
}

namespace {

std::string base_text(const CorrelatorKey& key) {
  if (key.twice_genus == 0 && key.n == 2) return "dz1 dz2 / (z1 - z2)^2";
  return base_correlator(key).to_string();
}

ordered_json rational_json(const Rational& r) {
  return ordered_json{{"num", r.numerator().get_str()}, {"den", r.denominator().get_str()}};
}

ordered_json genus_json(const CorrelatorKey& key) {
  if (key.twice_genus % 2 == 0) return ordered_json(key.twice_genus / 2);
  return ordered_json(key.genus_string());
}

template <class C, class Render>
std::string render_value(const CorrelatorKey& key, const LaurentDifferential<C>& value, OutputFormat format,
                         Render render, bool experimental) {
  switch (format) {
    case OutputFormat::Text:
      return value.to_string() + "\n";
    case OutputFormat::Json: {
      ordered_json terms = ordered_json::array();
      for (const auto& [e, c] : value.terms()) terms.push_back(ordered_json{{"exponents", e}, {"value", render(c)}});
      ordered_json doc{{"h", genus_json(key)}, {"n", key.n}};
      if (experimental) doc["status"] = "experimental";
      doc["text"] = value.to_string();
      doc["terms"] = terms;
      return doc.dump(2) + "\n";
    }
    case OutputFormat::Csv:
      break;
  }
  return {};
}

ordered_json q_poly_json(const AuxPolynomial& p) {
  ordered_json coeffs = ordered_json::array();
  for (const auto& c : p.coefficients()) coeffs.push_back(rational_json(c));
  return coeffs;
}

}  // namespace

std::string Engine::correlator(const CorrelatorKey& key, bool allow_unstable) {
  // W_{1/2,1} is an initial condition of the recursion and is always printable.
  const bool initial = key.twice_genus == 1 && key.n == 1;
  if (!key.stable()) {
    if (!allow_unstable && !initial) throw ContractError(key.to_string() + " is unstable; pass --allow-unstable for the base table");
    if (config_.format == OutputFormat::Json) {
      ordered_json doc{{"h", genus_json(key)}, {"n", key.n}, {"text", base_text(key)}, {"unstable", true}};
      return doc.dump(2) + "\n";
    }
    return base_text(key) + "\n";
  }
  if (key.measure() > config_.budget)
    throw ContractError(key.to_string() + " has 4g+n = " + std::to_string(key.measure()) + ", beyond budget " +
                        std::to_string(config_.budget));
  if (config_.q_mode == QMode::Symbolic) {
    const auto& value = *q_correlators().find(key);
    if (config_.format == OutputFormat::Csv) {
      std::string out = "exponents,value\n";
      for (const auto& [e, c] : value.terms()) {
        std::string ex;
        for (std::size_t i = 0; i < e.size(); ++i) ex += (i ? " " : "") + std::to_string(e[i]);
        out += ex + ",\"" + c.to_string("Q") + "\"\n";
      }
      return out;
    }
    return render_value(key, value, config_.format, q_poly_json, true);
  }
  const auto value = config_.q_mode == QMode::Value ? specialize_q(*q_correlators().find(key), config_.q_value)
                                                    : *correlators().find(key);
  if (config_.format == OutputFormat::Csv) {
    std::string out = "exponents,value\n";
    for (const auto& [e, c] : value.terms()) {
      std::string ex;
      for (std::size_t i = 0; i < e.size(); ++i) ex += (i ? " " : "") + std::to_string(e[i]);
      out += ex + "," + c.to_string() + "\n";
    }
    return out;
  }
  return render_value(key, value, config_.format, rational_json, config_.q_mode == QMode::Value);
}

namespace {

void fail(CheckReport& r, const std::string& what) {
  if (r.passed) r.counterexample = what;
  r.passed = false;
}

std::string first_term(const TPolynomial& p) {
  const auto& [m, c] = *p.terms().begin();
  return c.to_string() + "*" + (m.empty() ? std::string("1") : monomial_to_string(m));
}

}  // namespace

CheckReport Engine::check(const std::string& suite) {
  CheckReport r;
  r.suite = suite;
  const int budget = config_.budget;
  if (suite == "all") {
    for (const auto& s : check_suites()) {
      if (s == "all") continue;
      const auto sub = check(s);
      r.lines.push_back(s + ": " + (sub.passed ? "PASS" : "FAIL"));
      if (!sub.passed) fail(r, s + ": " + sub.counterexample);
    }
    return r;
  }
  if (suite == "constraints") {
    const auto& f = recursion_free_energy();
    auto run = [&](const std::string& name, const ModeOperator& op, int leading, bool gating) {
      const auto residual = constraint_residual(op, leading, f, budget);
      const auto checked = constraint_monomials(leading, budget).size();
      r.lines.push_back(name + ": " + (residual.is_zero() ? "0" : "nonzero") + " on " + std::to_string(checked) +
                        " monomials" + (gating ? "" : " (negative mode, informational)"));
      if (!residual.is_zero() && gating) fail(r, name + " residual " + first_term(residual));
    };
    for (int k = 0; k <= 4; ++k) {
      run("Lhat_" + std::to_string(k), Lhat(k), leading_index_L(k), true);
      run("Mhat_" + std::to_string(k), Mhat(k), leading_index_M(k), true);
    }
    run("Lhat_-1", Lhat(-1), leading_index_L(-1), false);
    run("Mhat_-1", Mhat(-1), leading_index_M(-1), false);
    run("Mhat_-2", Mhat(-2), leading_index_M(-2), false);
    const auto zero = TruncatedFreeEnergy::zero();
    const Rational l0 = act_on_exp(Lhat(0), zero, {});
    const Rational m0 = act_on_exp(Mhat(0), zero, {});
    r.lines.push_back("sentinel Lhat_0 at F = 0: " + l0.to_string());
    r.lines.push_back("sentinel Mhat_0 at F = 0: " + m0.to_string());
    if (l0 != Rational(13, 8)) fail(r, "Lhat_0 sentinel is " + l0.to_string() + ", expected 13/8");
    if (m0 != Rational(3, 4)) fail(r, "Mhat_0 sentinel is " + m0.to_string() + ", expected 3/4");
    return r;
  }
  if (suite == "master") {
    const auto& f = recursion_free_energy();
    for (int which : {2, 3}) {
      const auto residual = master_equation_residual(which, f, budget, {config_.t_degree});
      const std::string name = which == 2 ? "quadratic master equation" : "cubic master equation";
      r.lines.push_back(name + ": " + (residual.is_zero() ? "0" : residual.to_string()));
      if (!residual.is_zero()) fail(r, name + " residual " + residual.to_string());
    }
    return r;
  }
  if (suite == "dual") {
    const auto& store = correlators();
    const auto& f = oracle();
    int agreed = 0;
    for (const auto& key : stable_keys(budget)) {
      if (*store.find(key) == correlator_from_free_energy(f, key)) {
        ++agreed;
      } else {
        fail(r, key.to_string() + " differs between recursion and oracle");
      }
    }
    if (!(recursion_free_energy() == f)) fail(r, "assembled free energies differ");
    r.lines.push_back(std::to_string(agreed) + " of " + std::to_string(stable_keys(budget).size()) +
                      " correlators agree with the oracle");
    return r;
  }
  if (suite == "symmetry") {
    const auto& store = correlators();
    for (const auto& key : stable_keys(budget)) {
      const auto report = symmetry_report(key, *store.find(key));
      if (!report.symmetric()) fail(r, report.to_string());
    }
    r.lines.push_back(std::to_string(stable_keys(budget).size()) + " correlators checked");
    return r;
  }
  if (suite == "homogeneity") {
    const auto& store = correlators();
    std::size_t terms = 0;
    for (const auto& key : stable_keys(budget)) {
      for (const auto& [e, c] : store.find(key)->terms()) {
        ++terms;
        int total = 0;
        for (int x : e) total -= x;
        if (total != key.pole_total()) fail(r, key.to_string() + " has a term with pole total " + std::to_string(total));
      }
    }
    for (const auto& [m, c] : recursion_free_energy().coefficients()) {
      ++terms;
      if (!stratum_of(m)) fail(r, "F monomial " + monomial_to_string(m) + " lies in no stratum");
    }
    r.lines.push_back(std::to_string(terms) + " terms checked");
    return r;
  }
  if (suite == "quantum-curve") {
    const int order = config_.hbar_order;
    const int needed = 2 * (order + 1) + 1;
    TruncatedFreeEnergy f = needed <= budget ? recursion_free_energy() : solve_F(needed);
    const auto psi = principal_specialize(f, order);
    r.lines.push_back("decomposition: " + kUnstableDecomposition);
    const auto at_one = quantum_curve_residual(psi, Rational(1), order);
    for (const auto& s : residual_by_stratum(at_one, order)) {
      r.lines.push_back("Q = 1, stratum " + std::to_string(s.stratum) + ": " + (s.zero ? "0" : s.leading));
      if (!s.zero) fail(r, "stratum " + std::to_string(s.stratum) + " residual " + s.leading);
    }
    const auto symbolic = quantum_curve_residual(psi, order);
    const auto semiclassical = symbolic.stratum(0);
    r.lines.push_back("y^3 - 2xy with symbolic Q: " + std::string(semiclassical.is_zero() ? "0" : semiclassical.to_string()));
    if (!semiclassical.is_zero()) fail(r, "semiclassical residual " + semiclassical.to_string());
    if (config_.q_mode == QMode::Symbolic) {
      for (const auto& s : residual_by_stratum(symbolic, order))
        r.lines.push_back("symbolic Q, stratum " + std::to_string(s.stratum) + ": " + (s.zero ? "0" : s.leading));
    } else if (config_.q_mode == QMode::Value && config_.q_value != Rational(1)) {
      const auto at_q = quantum_curve_residual(psi, config_.q_value, order);
      for (const auto& s : residual_by_stratum(at_q, order))
        r.lines.push_back("Q = " + config_.q_value.to_string() + ", stratum " + std::to_string(s.stratum) + ": " +
                          (s.zero ? "0" : s.leading));
    }
    // Sensitivity: a perturbed coefficient of F must show up in the residual.
    const Monomial probe{1, 1, 1};
    TruncatedFreeEnergy mutated = f;
    mutated.set(probe, f.coefficient(probe) + Rational(1));
    const auto mutated_residual = quantum_curve_residual(principal_specialize(mutated, order), Rational(1), order);
    const bool detected = order >= 1 && !mutated_residual.is_zero();
    r.lines.push_back(std::string("mutation of ") + monomial_to_string(probe) + ": " +
                      (detected ? "detected" : "not detected"));
    if (order >= 1 && !detected) fail(r, "mutated free energy gives a zero residual");
    return r;
  }
  if (suite == "q-symmetry") {
    const auto& q_store = q_correlators();
    const auto& store = correlators();
    bool witnessed = false;
    for (const auto& key : stable_keys(budget)) {
      const auto& value = *q_store.find(key);
      const auto audit = audit_q_correlator(key, value, *store.find(key));
      if (!audit.ok()) fail(r, audit.first_failure);
      const auto report = symmetry_report(key, value);
      r.lines.push_back(report.to_string() + " (experimental)");
      if (!report.symmetric()) {
        if (key.euler_level() < 3) fail(r, key.to_string() + " should be symmetric: " + report.to_string());
        witnessed = true;
      }
    }
    if (!witnessed && budget >= CorrelatorKey{3, 2}.measure())
      fail(r, "no asymmetry witness among the Q-graded correlators");
    r.lines.push_back(witnessed ? "asymmetry witnessed, as expected" : "no asymmetry within budget");
    return r;
  }
  throw ContractError("unknown check suite '" + suite + "'");
}

Table Engine::table() { return tabulate(config_.budget, &correlators(), &oracle()); }

std::string Engine::render_table() {
  const auto t = table();
  switch (config_.format) {
    case OutputFormat::Json:
      return table_to_json(t);
    case OutputFormat::Csv:
      return table_to_csv(t);
    case OutputFormat::Text:
      return table_to_text(t);
  }
  return {};
}

std::string Engine::export_data(const std::string& what) {
  const int budget = config_.budget;
  if (what == "table") return render_table();
  if (what == "correlators") {
    switch (config_.format) {
      case OutputFormat::Json:
        return correlators_to_json(correlators(), budget);
      case OutputFormat::Csv:
        return correlators_to_csv(correlators(), budget);
      case OutputFormat::Text:
        return correlators_to_text(correlators(), budget);
    }
  }
  if (what == "q-correlators") {
    if (config_.format == OutputFormat::Json) return q_correlators_to_json(q_correlators(), budget);
    if (config_.format == OutputFormat::Text) return q_correlators_to_text(q_correlators(), budget);
    throw ContractError("q-correlators export supports json and text");
  }
  if (what == "q-symmetry") {
    ordered_json reports = ordered_json::array();
    std::string text;
    for (const auto& key : stable_keys(budget)) {
      const auto report = symmetry_report(key, *q_correlators().find(key));
      ordered_json entry{{"h", genus_json(key)}, {"n", key.n}, {"status", report.symmetric() ? "symmetric" : "asymmetric"}};
      if (report.witness) {
        ordered_json perm = ordered_json::array();
        for (int p : report.witness->permutation) perm.push_back(p + 1);
        entry["witness"] = ordered_json{{"permutation", perm},
                                        {"exponents", report.witness->term},
                                        {"original", report.witness->original.to_string("Q")},
                                        {"permuted", report.witness->permuted.to_string("Q")}};
      }
      reports.push_back(entry);
      text += report.to_string() + "\n";
    }
    if (config_.format == OutputFormat::Json) {
      ordered_json doc{{"format", "otr-q-symmetry"},
                       {"version", kExportFormatVersion},
                       {"status", "experimental"},
                       {"budget", budget},
                       {"reports", reports}};
      return doc.dump(2) + "\n";
    }
    if (config_.format == OutputFormat::Text) return text;
    throw ContractError("q-symmetry export supports json and text");
  }
  throw ContractError("unknown export '" + what + "' (expected correlators, table, q-correlators or q-symmetry)");
}

}  // namespace otr
