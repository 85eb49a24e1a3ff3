#include "otr/recursion.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <set>
#include <thread>

namespace otr {

namespace {

const std::string& W = kIntegrationVariable;

bool exists(const CorrelatorKey& k) { return k.twice_genus >= 0 && k.n >= 1 && (k.stable() || k.is_base()); }

template <class C>
C q_power(int power);

template <>
Rational q_power<Rational>(int) {
  return Rational(1);
}

template <>
AuxPolynomial q_power<AuxPolynomial>(int power) {
  return AuxPolynomial::monomial(Rational(1), power);
}

// Ordered assignments of `count` items to `parts` labelled parts.
std::vector<std::vector<std::vector<int>>> splits(int count, int parts) {
  std::vector<std::vector<std::vector<int>>> out;
  int total = 1;
  for (int i = 0; i < count; ++i) total *= parts;
  for (int code = 0; code < total; ++code) {
    std::vector<std::vector<int>> s(static_cast<std::size_t>(parts));
    int c = code;
    for (int i = 0; i < count; ++i) {
      s[static_cast<std::size_t>(c % parts)].push_back(i + 1);
      c /= parts;
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<int> with_w(int copies, const std::vector<int>& rest) {
  std::vector<int> s(static_cast<std::size_t>(copies), 0);
  s.insert(s.end(), rest.begin(), rest.end());
  return s;
}

template <class C>
class Frame {
 public:
  Frame(const CorrelatorKey& target, const BasicCorrelatorStore<C>& store, int order)
      : target_(target), store_(store), order_(order) {
    vars_.push_back({W, 0});
    for (int i = 1; i < target.n; ++i) vars_.push_back({"z" + std::to_string(i), 0});
  }

  int others() const { return target_.n - 1; }
  const CorrelatorKey& target() const { return target_; }

  LaurentDifferential<C> zero(int w_weight) const {
    std::vector<Variable> v = vars_;
    v[0].weight = w_weight;
    for (std::size_t i = 1; i < v.size(); ++i) v[i].weight = 1;
    return LaurentDifferential<C>(v);
  }

  // The factor `key` placed on frame slots (0 is w). Marks B expansions via `expanded`.
  LaurentDifferential<C> factor(const CorrelatorKey& key, const std::vector<int>& slots, bool* expanded) const {
    *expanded = false;
    if (key.twice_genus == 0 && key.n == 1) {
      LaurentDifferential<C> r(vars_);
      r.mutable_variables()[0].weight = 1;
      Exponents e(vars_.size(), 0);
      e[0] = 2;
      r.add_term(e, C(Rational(-1)));
      return r;
    }
    if (key.twice_genus == 1 && key.n == 1) {
      LaurentDifferential<C> r(vars_);
      r.mutable_variables()[0].weight = 1;
      Exponents e(vars_.size(), 0);
      e[0] = -1;
      r.add_term(e, q_power<C>(1));
      return r;
    }
    if (key.twice_genus == 0 && key.n == 2) {
      LaurentDifferential<C> r(vars_);
      const auto a = static_cast<std::size_t>(slots[0]);
      const auto b = static_cast<std::size_t>(slots[1]);
      if (a == b) {
        r.mutable_variables()[a].weight = 2;
        Exponents e(vars_.size(), 0);
        e[a] = -2;
        r.add_term(e, C(Rational(1, 4)));
        return r;
      }
      *expanded = true;
      r.mutable_variables()[a].weight = 1;
      r.mutable_variables()[b].weight = 1;
      Exponents e(vars_.size(), 0);
      for (int k = 1; k <= order_; ++k) {
        e[a] = k - 1;
        e[b] = -(k + 1);
        r.add_term(e, C(Rational(k)));
      }
      r.mark_expanded_pair(vars_[a].name, vars_[b].name);
      return r;
    }
    auto value = store_.find(key);
    if (!value)
      throw ContractError("missing dependency " + key.to_string() + " for " + target_.to_string());
    return embed(*value, vars_, slots);
  }

  // Product of factors with w-truncation at 1; intermediate cuts keep every term that can
  // still reach w^1 after the remaining factors.
  LaurentDifferential<C> product(std::vector<LaurentDifferential<C>> fs, const std::vector<bool>& expanded) const {
    std::vector<int> low(fs.size(), 0);
    for (std::size_t i = 0; i < fs.size(); ++i) low[i] = fs[i].min_exponent(W).value_or(0);
    for (std::size_t i = 0; i < fs.size(); ++i) {
      if (!expanded[i]) continue;
      int rest = 0;
      for (std::size_t j = 0; j < fs.size(); ++j)
        if (j != i) rest += low[j];
      if (order_ + rest <= 1)
        throw ContractError("expansion order " + std::to_string(order_) + " too small for " + target_.to_string());
    }
    LaurentDifferential<C> acc = fs[0];
    for (std::size_t i = 1; i < fs.size(); ++i) {
      int later = 0;
      for (std::size_t j = i + 1; j < fs.size(); ++j) later += low[j];
      acc = mul(acc, fs[i], Truncation{W, 1 - later});
    }
    return acc;
  }

 private:
  CorrelatorKey target_;
  const BasicCorrelatorStore<C>& store_;
  int order_;
  std::vector<Variable> vars_;
};

std::vector<int> frame_slots(int copies, const std::vector<int>& zs) { return with_w(copies, zs); }

template <class C>
void add_into(LaurentDifferential<C>& acc, const LaurentDifferential<C>& piece) {
  add_to(acc, piece);
}

}  // namespace

Laurent base_correlator(const CorrelatorKey& key) {
  if (key.stable()) throw ContractError(key.to_string() + " is stable; use compute_correlator");
  if (key.twice_genus == 0 && key.n == 1) return Laurent::monomial({{"z1", 1}}, {2}, Rational(-1));
  if (key.twice_genus == 1 && key.n == 1) return Laurent::monomial({{"z1", 1}}, {-1}, Rational(1));
  if (key.twice_genus == 0 && key.n == 2)
    throw ContractError("W_{0,2} has a diagonal pole; it is only available through bergman_expansion");
  throw ContractError(key.to_string() + " is not an initial condition");
}

Laurent bergman_expansion(const std::string& first, const std::string& second, int order) {
  if (order < 1) throw ContractError("expansion order must be positive");
  Laurent r({{first, 1}, {second, 1}});
  for (int k = 1; k <= order; ++k) r.add_term({k - 1, -(k + 1)}, Rational(k));
  r.mark_expanded_pair(first, second);
  return r;
}

Laurent tilde_w02_diagonal() { return Laurent::monomial({{W, 2}}, {-2}, Rational(1, 4)); }

Laurent expand_B_integral(int sign, int order) {
  if (order < 1) throw ContractError("expansion order must be positive");
  if (sign != 1 && sign != -1) throw ContractError("sign must be +1 or -1");
  Laurent r({{kKernelVariable, 1}, {W, 0}});
  for (int k = 1; k <= order; ++k) r.add_term({-(k + 1), k}, Rational((sign < 0 && k % 2) ? -1 : 1));
  return r;
}

Laurent kernel(int j, int order) {
  if (j != 2 && j != 3) throw ContractError("kernel index must be 2 or 3");
  Laurent minus = expand_B_integral(-1, order);
  if (j % 2) minus *= Rational(-1);
  Laurent numerator = subtract(minus, expand_B_integral(1, order));
  // Divide by 2j (-w^2 dw)^{j-1}.
  Rational scale = Rational(1, 2 * j);
  if ((j - 1) % 2) scale = -scale;
  numerator *= scale;
  Laurent shifted = shift_exponent(numerator, W, -2 * (j - 1));
  return shift_weight(shifted, W, -(j - 1));
}

template <class C>
LaurentDifferential<C> apply_D1(const LaurentDifferential<C>& a, const std::string& v) {
  const int idx = a.index_of(v);
  if (idx < 0) throw StructuralError("D1: unknown variable '" + v + "'");
  const auto i = static_cast<std::size_t>(idx);
  LaurentDifferential<C> r = shift_weight(LaurentDifferential<C>(a.variables()), v, 1);
  r.mutable_pairs() = a.expanded_pairs();
  for (const auto& [e, c] : a.terms()) {
    Exponents x = e;
    x[i] -= 1;
    C term = c;
    term *= Rational(1 - e[i]);
    r.add_term(x, term);
  }
  return r;
}

template <class C>
LaurentDifferential<C> apply_D2(const LaurentDifferential<C>& a, const std::string& v) {
  const int idx = a.index_of(v);
  if (idx < 0) throw StructuralError("D2: unknown variable '" + v + "'");
  const auto i = static_cast<std::size_t>(idx);
  LaurentDifferential<C> r = shift_weight(LaurentDifferential<C>(a.variables()), v, 2);
  r.mutable_pairs() = a.expanded_pairs();
  for (const auto& [e, c] : a.terms()) {
    Exponents x = e;
    x[i] -= 2;
    const long k = e[i];
    C term = c;
    term *= Rational(k * (k - 1) - 3 * k + 3, 2);
    r.add_term(x, term);
  }
  return r;
}

int required_kernel_order(const CorrelatorKey& key) {
  if (!key.stable()) throw ContractError(key.to_string() + " is not stable");
  const int others = key.n - 1;
  return 3 * key.twice_genus - 6 + 4 * (others + 2) + 4;
}

template <class C>
LaurentDifferential<C> assemble_R2(const CorrelatorKey& key, const BasicCorrelatorStore<C>& store, int order) {
  Frame<C> frame(key, store, order);
  const int tg = key.twice_genus;
  LaurentDifferential<C> acc = frame.zero(2);
  std::vector<int> zs;
  for (int i = 1; i <= frame.others(); ++i) zs.push_back(i);
  bool expanded = false;

  const CorrelatorKey diagonal{tg - 2, frame.others() + 2};
  if (exists(diagonal)) add_into(acc, frame.factor(diagonal, frame_slots(2, zs), &expanded));

  for (const auto& split : splits(frame.others(), 2)) {
    for (int t1 = 0; t1 <= tg; ++t1) {
      const CorrelatorKey k1{t1, static_cast<int>(split[0].size()) + 1};
      const CorrelatorKey k2{tg - t1, static_cast<int>(split[1].size()) + 1};
      if (!exists(k1) || !exists(k2) || k1 == key || k2 == key) continue;
      bool e1 = false;
      bool e2 = false;
      auto f1 = frame.factor(k1, frame_slots(1, split[0]), &e1);
      auto f2 = frame.factor(k2, frame_slots(1, split[1]), &e2);
      add_into(acc, frame.product({std::move(f1), std::move(f2)}, {e1, e2}));
    }
  }
  return acc;
}

template <class C>
LaurentDifferential<C> assemble_R3(const CorrelatorKey& key, const BasicCorrelatorStore<C>& store, int order) {
  Frame<C> frame(key, store, order);
  const int tg = key.twice_genus;
  LaurentDifferential<C> acc = frame.zero(3);
  std::vector<int> zs;
  for (int i = 1; i <= frame.others(); ++i) zs.push_back(i);
  bool expanded = false;

  const CorrelatorKey triple_diagonal{tg - 4, frame.others() + 3};
  if (exists(triple_diagonal)) add_into(acc, frame.factor(triple_diagonal, frame_slots(3, zs), &expanded));

  for (const auto& split : splits(frame.others(), 2)) {
    for (int t1 = 0; t1 <= tg - 2; ++t1) {
      const CorrelatorKey k1{t1, static_cast<int>(split[0].size()) + 1};
      const CorrelatorKey k2{tg - 2 - t1, static_cast<int>(split[1].size()) + 2};
      if (!exists(k1) || !exists(k2)) continue;
      bool e1 = false;
      bool e2 = false;
      auto f1 = frame.factor(k1, frame_slots(1, split[0]), &e1);
      auto f2 = frame.factor(k2, frame_slots(2, split[1]), &e2);
      auto p = frame.product({std::move(f1), std::move(f2)}, {e1, e2});
      p *= Rational(3);
      add_into(acc, p);
    }
  }

  for (const auto& split : splits(frame.others(), 3)) {
    for (int t1 = 0; t1 <= tg; ++t1) {
      for (int t2 = 0; t1 + t2 <= tg; ++t2) {
        const CorrelatorKey ks[3] = {{t1, static_cast<int>(split[0].size()) + 1},
                                     {t2, static_cast<int>(split[1].size()) + 1},
                                     {tg - t1 - t2, static_cast<int>(split[2].size()) + 1}};
        bool skip = false;
        for (const auto& k : ks)
          if (!exists(k) || k == key) skip = true;
        if (skip) continue;
        std::vector<LaurentDifferential<C>> fs;
        std::vector<bool> ex(3, false);
        for (std::size_t i = 0; i < 3; ++i) {
          bool e = false;
          fs.push_back(frame.factor(ks[i], frame_slots(1, split[i]), &e));
          ex[i] = e;
        }
        add_into(acc, frame.product(std::move(fs), ex));
      }
    }
  }
  return acc;
}

template <class C>
LaurentDifferential<C> integrand2(const CorrelatorKey& key, const BasicCorrelatorStore<C>& store, int order) {
  LaurentDifferential<C> acc = assemble_R2(key, store, order);
  const CorrelatorKey lower{key.twice_genus - 1, key.n};
  if (exists(lower)) {
    Frame<C> frame(key, store, order);
    std::vector<int> zs;
    for (int i = 1; i <= frame.others(); ++i) zs.push_back(i);
    bool expanded = false;
    auto d = apply_D1(frame.factor(lower, frame_slots(1, zs), &expanded), W);
    d.scale(q_power<C>(1));
    acc = add(acc, truncate_above(d, W, 1));
  }
  return acc;
}

template <class C>
LaurentDifferential<C> integrand3(const CorrelatorKey& key, const BasicCorrelatorStore<C>& store, int order) {
  LaurentDifferential<C> acc = assemble_R3(key, store, order);
  const CorrelatorKey lower{key.twice_genus - 2, key.n};
  if (exists(lower)) {
    Frame<C> frame(key, store, order);
    std::vector<int> zs;
    for (int i = 1; i <= frame.others(); ++i) zs.push_back(i);
    bool expanded = false;
    auto d = apply_D2(frame.factor(lower, frame_slots(1, zs), &expanded), W);
    d.scale(q_power<C>(2));
    d *= Rational(-1);
    acc = add(acc, truncate_above(d, W, 1));
  }
  return acc;
}

template <class C>
LaurentDifferential<C> residue_of_product(const Laurent& kernel_expansion, const LaurentDifferential<C>& integrand) {
  const int kw = kernel_expansion.index_of(W);
  const int iw = integrand.index_of(W);
  if (kw < 0 || iw < 0) throw StructuralError("residue: both factors must depend on w");
  const int weight = kernel_expansion.variables()[static_cast<std::size_t>(kw)].weight +
                     integrand.variables()[static_cast<std::size_t>(iw)].weight;
  if (weight != 1) throw StructuralError("residue: dw-weight is " + std::to_string(weight) + ", expected 1");
  if (kernel_expansion.arity() != 2) throw StructuralError("residue: kernel must be in z0 and w");
  const std::size_t kz = kw == 0 ? 1 : 0;

  std::map<int, std::vector<std::pair<int, Rational>>> by_w;
  int kernel_top = 0;
  bool first = true;
  for (const auto& [e, c] : kernel_expansion.terms()) {
    by_w[e[static_cast<std::size_t>(kw)]].emplace_back(e[kz], c);
    if (first || e[static_cast<std::size_t>(kw)] > kernel_top) kernel_top = e[static_cast<std::size_t>(kw)];
    first = false;
  }

  std::vector<Variable> vars{kernel_expansion.variables()[kz]};
  for (std::size_t j = 0; j < integrand.arity(); ++j)
    if (static_cast<int>(j) != iw) vars.push_back(integrand.variables()[j]);
  LaurentDifferential<C> r(vars);
  Exponents x(vars.size());
  for (const auto& [e, c] : integrand.terms()) {
    const int need = -1 - e[static_cast<std::size_t>(iw)];
    if (need > kernel_top)
      throw ContractError("kernel expansion order too small: needs w^" + std::to_string(need));
    auto it = by_w.find(need);
    if (it == by_w.end()) continue;
    std::size_t p = 1;
    for (std::size_t j = 0; j < e.size(); ++j)
      if (static_cast<int>(j) != iw) x[p++] = e[j];
    for (const auto& [z0, kc] : it->second) {
      x[0] = z0;
      C v = c;
      v *= kc;
      r.add_term(x, v);
    }
  }
  return r;
}

template <class C>
LaurentDifferential<C> compute_correlator(const CorrelatorKey& key, const BasicCorrelatorStore<C>& store,
                                          const RecursionOptions& options) {
  if (!key.stable()) throw ContractError(key.to_string() + " is not stable");
  const int order = options.kernel_order > 0 ? options.kernel_order : required_kernel_order(key);
  const auto i2 = integrand2(key, store, order);
  const auto i3 = integrand3(key, store, order);
  const Laurent k2 = kernel(2, order);
  const Laurent k3 = kernel(3, order);
  LaurentDifferential<C> raw;
  if (options.fused_residue) {
    raw = add(residue_of_product(k2, i2), residue_of_product(k3, i3));
  } else {
    auto lift = [](const Laurent& k) { return map_coefficients<C>(k, [](const Rational& c) { return C(c); }); };
    raw = add(residue_at_zero(mul(lift(k2), i2), W), residue_at_zero(mul(lift(k3), i3), W));
  }
  std::map<std::string, std::string> names{{kKernelVariable, "z1"}};
  for (int i = 1; i < key.n; ++i) names["z" + std::to_string(i)] = "z" + std::to_string(i + 1);
  return align(rename(raw, names), correlator_variables(key.n));
}

template <class C>
void compute_all(int budget, BasicCorrelatorStore<C>& store, int threads, const RecursionOptions& options) {
  const auto keys = stable_keys(budget);
  std::map<int, std::vector<CorrelatorKey>> levels;
  for (const auto& k : keys) levels[k.measure()].push_back(k);
  std::set<CorrelatorKey> done;
  for (const auto& [m, level] : levels) {
    for (const auto& k : level)
      for (const auto& d : dependencies(k))
        if (!done.count(d)) throw BookkeepingError(d.to_string() + " is not ordered before " + k.to_string());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= level.size()) return;
        try {
          const auto& k = level[i];
          store.get_or_compute(k, [&]() { return compute_correlator(k, store, options); });
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    };
    const int count = std::max(1, std::min<int>(threads, static_cast<int>(level.size())));
    if (count == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (int t = 0; t < count; ++t) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    for (const auto& k : level) done.insert(k);
  }
}

std::vector<CorrelatorKey> dependencies(const CorrelatorKey& key) {
  std::set<CorrelatorKey> deps;
  const int tg = key.twice_genus;
  const int others = key.n - 1;
  auto note = [&](const CorrelatorKey& k) {
    if (exists(k) && k.stable()) deps.insert(k);
  };
  note({tg - 2, others + 2});
  note({tg - 1, key.n});
  note({tg - 2, key.n});
  note({tg - 4, others + 3});
  for (int a = 0; a <= others; ++a) {
    for (int t1 = 0; t1 <= tg; ++t1) {
      const CorrelatorKey k1{t1, a + 1};
      const CorrelatorKey k2{tg - t1, others - a + 1};
      if (exists(k1) && exists(k2) && k1 != key && k2 != key) {
        note(k1);
        note(k2);
      }
      if (t1 <= tg - 2) {
        note({t1, a + 1});
        note({tg - 2 - t1, others - a + 2});
      }
    }
    for (int b = 0; a + b <= others; ++b) {
      const int c = others - a - b;
      for (int t1 = 0; t1 <= tg; ++t1)
        for (int t2 = 0; t1 + t2 <= tg; ++t2) {
          const CorrelatorKey ks[3] = {{t1, a + 1}, {t2, b + 1}, {tg - t1 - t2, c + 1}};
          bool ok = true;
          for (const auto& k : ks)
            if (!exists(k) || k == key) ok = false;
          if (ok)
            for (const auto& k : ks) note(k);
        }
    }
  }
  return {deps.begin(), deps.end()};
}

#define OTR_INSTANTIATE(C)                                                                                     \
  template LaurentDifferential<C> apply_D1(const LaurentDifferential<C>&, const std::string&);                 \
  template LaurentDifferential<C> apply_D2(const LaurentDifferential<C>&, const std::string&);                 \
  template LaurentDifferential<C> assemble_R2(const CorrelatorKey&, const BasicCorrelatorStore<C>&, int);      \
  template LaurentDifferential<C> assemble_R3(const CorrelatorKey&, const BasicCorrelatorStore<C>&, int);      \
  template LaurentDifferential<C> integrand2(const CorrelatorKey&, const BasicCorrelatorStore<C>&, int);       \
  template LaurentDifferential<C> integrand3(const CorrelatorKey&, const BasicCorrelatorStore<C>&, int);       \
  template LaurentDifferential<C> residue_of_product(const Laurent&, const LaurentDifferential<C>&);           \
  template LaurentDifferential<C> compute_correlator(const CorrelatorKey&, const BasicCorrelatorStore<C>&,     \
                                                     const RecursionOptions&);                                 \
  template void compute_all(int, BasicCorrelatorStore<C>&, int, const RecursionOptions&);

OTR_INSTANTIATE(Rational)
OTR_INSTANTIATE(AuxPolynomial)

#undef OTR_INSTANTIATE

}  // namespace otr
