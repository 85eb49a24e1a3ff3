#pragma once

#include <compare>
#include <condition_variable>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "otr/laurent.hpp"

namespace otr {

// (2g, n). Half-integer genus is exact since only twice the genus is stored.
struct CorrelatorKey {
  int twice_genus = 0;
  int n = 1;

  bool stable() const { return twice_genus - 2 + n > 0; }
  bool is_base() const;
  // 4g + n, the ordering measure of the recursion.
  int measure() const { return 2 * twice_genus + n; }
  // 2g - 2 + n in units of 1/2 is twice_genus - 2 + n.
  int euler_level() const { return twice_genus - 2 + n; }
  // Σ pole orders of a stable term: 6h - 6 + 4n.
  int pole_total() const { return 3 * twice_genus - 6 + 4 * n; }
  // Σ t-indices of an F monomial: 6h - 6 + 3n.
  int index_total() const { return 3 * twice_genus - 6 + 3 * n; }

  // Genus as "p/2" or an integer string.
  std::string genus_string() const;
  std::string to_string() const;

  static CorrelatorKey parse(const std::string& genus, int n);

  friend auto operator<=>(const CorrelatorKey&, const CorrelatorKey&) = default;
};

// Every stable key with 1 <= n and measure <= budget, sorted by (measure, key).
std::vector<CorrelatorKey> stable_keys(int budget);

// Variables z1..zn with weight 1.
std::vector<Variable> correlator_variables(int n);

template <class C>
struct BasicCorrelator {
  CorrelatorKey key;
  LaurentDifferential<C> value;
};

using Correlator = BasicCorrelator<Rational>;

// Thread-safe memo of published correlators. A key is published at most once;
// a second computation of an in-flight key waits for the first.
template <class C>
class BasicCorrelatorStore {
 public:
  using Value = LaurentDifferential<C>;

  std::shared_ptr<const Value> find(const CorrelatorKey& key) const {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = values_.find(key);
    return it == values_.end() ? nullptr : it->second;
  }

  bool contains(const CorrelatorKey& key) const { return find(key) != nullptr; }

  // Returns the published value; computes it with `make` if nobody has.
  std::shared_ptr<const Value> get_or_compute(const CorrelatorKey& key, const std::function<Value()>& make) {
    {
      std::unique_lock<std::mutex> lock(mutex_);
      for (;;) {
        auto it = values_.find(key);
        if (it != values_.end()) return it->second;
        if (!in_flight_.count(key)) break;
        cv_.wait(lock);
      }
      in_flight_.insert(key);
    }
    std::shared_ptr<const Value> made;
    try {
      made = std::make_shared<const Value>(make());
    } catch (...) {
      std::lock_guard<std::mutex> lock(mutex_);
      in_flight_.erase(key);
      cv_.notify_all();
      throw;
    }
    std::lock_guard<std::mutex> lock(mutex_);
    in_flight_.erase(key);
    auto [it, inserted] = values_.emplace(key, made);
    cv_.notify_all();
    return it->second;
  }

  // First writer wins; returns the value that ends up published.
  std::shared_ptr<const Value> publish(const CorrelatorKey& key, Value value) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto [it, inserted] = values_.emplace(key, std::make_shared<const Value>(std::move(value)));
    cv_.notify_all();
    return it->second;
  }

  std::vector<CorrelatorKey> keys() const {
    std::lock_guard<std::mutex> lock(mutex_);
    std::vector<CorrelatorKey> r;
    for (const auto& [k, v] : values_) r.push_back(k);
    return r;
  }

 private:
  mutable std::mutex mutex_;
  std::condition_variable cv_;
  std::map<CorrelatorKey, std::shared_ptr<const Value>> values_;
  std::set<CorrelatorKey> in_flight_;
};

using CorrelatorStore = BasicCorrelatorStore<Rational>;
using QCorrelatorStore = BasicCorrelatorStore<AuxPolynomial>;

}  // namespace otr
