#include "otr/numbers.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "otr/errors.hpp"

namespace otr {

using nlohmann::ordered_json;

Monomial IntersectionIndex::t_monomial() const {
  Monomial m;
  for (int a : interior) m.push_back(2 * a + 1);
  for (int b : boundary) m.push_back(2 * b + 2);
  std::sort(m.begin(), m.end());
  return m;
}

bool IntersectionIndex::dimension_ok() const {
  for (int a : interior)
    if (a < 0) return false;
  for (int b : boundary)
    if (b < 0) return false;
  int total = 0;
  for (int k : t_monomial()) total += k;
  return total == key().index_total();
}

IntersectionIndex IntersectionIndex::canonical() const {
  IntersectionIndex c = *this;
  std::sort(c.interior.begin(), c.interior.end());
  std::sort(c.boundary.begin(), c.boundary.end());
  return c;
}

namespace {

std::string power_run(const std::string& name, const std::vector<int>& indices) {
  std::string out;
  for (std::size_t i = 0; i < indices.size();) {
    std::size_t j = i;
    while (j < indices.size() && indices[j] == indices[i]) ++j;
    if (!out.empty()) out += " ";
    out += name + "_" + std::to_string(indices[i]);
    if (j - i > 1) out += "^" + std::to_string(j - i);
    i = j;
  }
  return out;
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s;
}

}  // namespace

std::string IntersectionIndex::to_string() const {
  const auto c = canonical();
  std::string body = power_run("tau", c.interior);
  const std::string b = power_run("sigma", c.boundary);
  if (!b.empty()) body += (body.empty() ? "" : " ") + b;
  return "<" + body + ">_" + key().genus_string();
}

IntersectionIndex IntersectionIndex::from_monomial(int twice_genus, const Monomial& m) {
  IntersectionIndex idx;
  idx.twice_genus = twice_genus;
  for (int k : m) {
    if (k % 2 == 1)
      idx.interior.push_back((k - 1) / 2);
    else
      idx.boundary.push_back((k - 2) / 2);
  }
  return idx.canonical();
}

Rational interior_normalization(int a) { return double_factorial(2 * a + 1); }

Rational boundary_normalization(int b) { return Rational(2).pow(b + 1) * factorial(b + 1); }

namespace {

Rational normalize(const IntersectionIndex& idx, Rational raw) {
  for (int a : idx.interior) raw /= interior_normalization(a);
  for (int b : idx.boundary) raw /= boundary_normalization(b);
  return raw;
}

}  // namespace

Extraction extract_number(const IntersectionIndex& idx, const CorrelatorStore& store, int budget) {
  if (!idx.dimension_ok()) return {Rational(0), true};
  const auto key = idx.key();
  if (key.measure() > budget)
    throw ContractError(idx.to_string() + " needs " + key.to_string() + ", beyond budget " + std::to_string(budget));
  const auto value = store.find(key);
  if (!value) throw ContractError(key.to_string() + " has not been computed");
  Exponents e;
  for (int k : idx.t_monomial()) e.push_back(-(k + 1));
  return {normalize(idx, value->coefficient(e)), false};
}

Extraction extract_number(const IntersectionIndex& idx, const TruncatedFreeEnergy& f) {
  if (!idx.dimension_ok()) return {Rational(0), true};
  const auto key = idx.key();
  if (!f.covers(key))
    throw ContractError(idx.to_string() + " needs " + key.to_string() + ", beyond budget " +
                        std::to_string(f.budget()));
  const Monomial m = idx.t_monomial();
  return {normalize(idx, f.coefficient(m) * symmetry_factor(m)), false};
}

namespace {

Rational label_normalization(int label) {
  return label % 2 == 1 ? interior_normalization((label - 1) / 2) : boundary_normalization((label - 2) / 2);
}

}  // namespace

std::string KPPolynomial::to_string() const {
  if (body_.is_zero()) return "0";
  std::string out;
  for (const auto& [m, c] : body_.terms()) {
    if (!out.empty()) out += " + ";
    std::string mono;
    for (std::size_t i = 0; i < m.size();) {
      std::size_t j = i;
      while (j < m.size() && m[j] == m[i]) ++j;
      if (!mono.empty()) mono += "*";
      mono += m[i] % 2 == 1 ? "T" + std::to_string((m[i] - 1) / 2) : "S" + std::to_string((m[i] - 2) / 2);
      if (j - i > 1) mono += "^" + std::to_string(j - i);
      i = j;
    }
    if (mono.empty())
      out += c.to_string();
    else if (c == Rational(1))
      out += mono;
    else
      out += c.to_string() + "*" + mono;
  }
  return out;
}

// t_k = generator_k / normalization_k
KPPolynomial to_kp_coordinates(const TPolynomial& p) {
  KPPolynomial r;
  for (const auto& [m, c] : p.terms()) {
    Rational v = c;
    for (int k : m) v /= label_normalization(k);
    r.add_term(m, v);
  }
  return r;
}

TPolynomial from_kp_coordinates(const KPPolynomial& p) {
  TPolynomial r;
  for (const auto& [m, c] : p.terms()) {
    Rational v = c;
    for (int k : m) v *= label_normalization(k);
    r.add_term(m, v);
  }
  return r;
}

Table tabulate(int budget, const CorrelatorStore* recursion, const TruncatedFreeEnergy* oracle) {
  Table table;
  table.budget = budget;
  struct Entry {
    std::optional<Rational> recursion, oracle;
  };
  std::map<std::pair<CorrelatorKey, Monomial>, Entry> entries;
  for (const auto& key : stable_keys(budget)) {
    if (recursion) {
      const auto value = recursion->find(key);
      if (!value) throw ContractError(key.to_string() + " has not been computed");
      for (const auto& [e, c] : value->terms()) {
        Monomial m;
        for (int x : e) m.push_back(-x - 1);
        if (!std::is_sorted(m.begin(), m.end())) continue;
        entries[{key, m}].recursion = c;
      }
    }
    if (oracle) {
      const TPolynomial stratum = oracle->stratum(key);
      for (const auto& [m, c] : stratum.terms()) entries[{key, m}].oracle = c * symmetry_factor(m);
    }
  }
  for (const auto& [km, entry] : entries) {
    const auto& [key, m] = km;
    TableRow row;
    row.index = IntersectionIndex::from_monomial(key.twice_genus, m);
    Rational raw;
    if (entry.recursion && entry.oracle) {
      if (!(*entry.recursion == *entry.oracle))
        throw InconsistencyError(row.index.to_string() + ": recursion gives " +
                                 normalize(row.index, *entry.recursion).to_string() + ", oracle gives " +
                                 normalize(row.index, *entry.oracle).to_string());
      raw = *entry.recursion;
      row.provenance = "both-agree";
    } else if (recursion && oracle) {
      throw InconsistencyError(row.index.to_string() + " appears in only one pipeline");
    } else {
      raw = entry.recursion ? *entry.recursion : *entry.oracle;
      row.provenance = entry.recursion ? "recursion" : "oracle";
    }
    row.value = normalize(row.index, raw);
    if (!row.value.is_zero()) table.rows.push_back(std::move(row));
  }
  std::stable_sort(table.rows.begin(), table.rows.end(), [](const TableRow& a, const TableRow& b) {
    const auto ka = std::make_tuple(a.index.twice_genus, a.index.size(), a.index.interior, a.index.boundary);
    const auto kb = std::make_tuple(b.index.twice_genus, b.index.size(), b.index.interior, b.index.boundary);
    return ka < kb;
  });
  return table;
}

namespace {

ordered_json rational_json(const Rational& r) {
  return ordered_json{{"num", r.numerator().get_str()}, {"den", r.denominator().get_str()}};
}

// Integer genus as a JSON number, half-integer as "p/2".
ordered_json genus_json(const CorrelatorKey& key) {
  if (key.twice_genus % 2 == 0) return ordered_json(key.twice_genus / 2);
  return ordered_json(key.genus_string());
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

}  // namespace

std::string table_to_json(const Table& table) {
  ordered_json rows = ordered_json::array();
  for (const auto& row : table.rows) {
    rows.push_back(ordered_json{{"h", genus_json(row.index.key())},
                                {"indices", {{"interior", row.index.interior}, {"boundary", row.index.boundary}}},
                                {"value", rational_json(row.value)},
                                {"provenance", row.provenance}});
  }
  ordered_json doc{{"format", "otr-table"}, {"version", kExportFormatVersion}, {"budget", table.budget}, {"rows", rows}};
  return doc.dump(2) + "\n";
}

std::string table_to_csv(const Table& table) {
  std::string out = "h,interior,boundary,value,provenance\n";
  for (const auto& row : table.rows)
    out += row.index.key().genus_string() + "," + join(row.index.interior) + "," + join(row.index.boundary) + "," +
           row.value.to_string() + "," + csv_field(row.provenance) + "\n";
  return out;
}

std::string table_to_text(const Table& table) {
  std::ostringstream out;
  for (const auto& row : table.rows)
    out << row.index.to_string() << " = " << row.value.to_string() << "  [" << row.provenance << "]\n";
  return out.str();
}

namespace {

template <class C, class Render>
ordered_json correlator_list(const BasicCorrelatorStore<C>& store, int budget, Render render) {
  ordered_json list = ordered_json::array();
  for (const auto& key : stable_keys(budget)) {
    const auto value = store.find(key);
    if (!value) throw ContractError(key.to_string() + " has not been computed");
    ordered_json terms = ordered_json::array();
    for (const auto& [e, c] : value->terms()) terms.push_back(ordered_json{{"exponents", e}, {"value", render(c)}});
    list.push_back(ordered_json{{"h", genus_json(key)}, {"n", key.n}, {"text", value->to_string()}, {"terms", terms}});
  }
  return list;
}

}  // namespace

std::string correlators_to_json(const CorrelatorStore& store, int budget) {
  ordered_json doc{{"format", "otr-correlators"},
                   {"version", kExportFormatVersion},
                   {"budget", budget},
                   {"correlators", correlator_list(store, budget, rational_json)}};
  return doc.dump(2) + "\n";
}

std::string correlators_to_csv(const CorrelatorStore& store, int budget) {
  std::string out = "h,n,exponents,value\n";
  for (const auto& key : stable_keys(budget)) {
    const auto value = store.find(key);
    if (!value) throw ContractError(key.to_string() + " has not been computed");
    for (const auto& [e, c] : value->terms())
      out += key.genus_string() + "," + std::to_string(key.n) + "," + join(e) + "," + c.to_string() + "\n";
  }
  return out;
}

std::string correlators_to_text(const CorrelatorStore& store, int budget) {
  std::string out;
  for (const auto& key : stable_keys(budget)) {
    const auto value = store.find(key);
    if (!value) throw ContractError(key.to_string() + " has not been computed");
    out += key.to_string() + " = " + value->to_string() + "\n";
  }
  return out;
}

std::string q_correlators_to_json(const QCorrelatorStore& store, int budget) {
  auto render = [](const AuxPolynomial& p) {
    ordered_json coeffs = ordered_json::array();
    for (const auto& c : p.coefficients()) coeffs.push_back(rational_json(c));
    return coeffs;
  };
  ordered_json doc{{"format", "otr-q-correlators"},
                   {"version", kExportFormatVersion},
                   {"status", "experimental"},
                   {"budget", budget},
                   {"correlators", correlator_list(store, budget, render)}};
  return doc.dump(2) + "\n";
}

std::string q_correlators_to_text(const QCorrelatorStore& store, int budget) {
  std::string out = "# Q-graded correlators (experimental)\n";
  for (const auto& key : stable_keys(budget)) {
    const auto value = store.find(key);
    if (!value) throw ContractError(key.to_string() + " has not been computed");
    out += key.to_string() + " = " + value->to_string() + "\n";
  }
  return out;
}

}  // namespace otr
