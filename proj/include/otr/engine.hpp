#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "otr/correlator.hpp"
#include "otr/free_energy.hpp"
#include "otr/numbers.hpp"

namespace otr {

enum class OutputFormat { Text, Json, Csv };
enum class QMode { Off, Symbolic, Value };

OutputFormat parse_format(const std::string& s);
QMode parse_q_mode(const std::string& s, Rational* value);

struct RunConfig {
  int budget = 8;    // max 4g + n
  int t_degree = 0;  // truncation for master equations; 0 derives it from the budget
  std::string cache_dir;
  OutputFormat format = OutputFormat::Text;
  QMode q_mode = QMode::Off;
  Rational q_value = Rational(1);
  int hbar_order = 2;
  int threads = 1;
};

struct CheckReport {
  std::string suite;
  bool passed = true;
  std::vector<std::string> lines;
  std::string counterexample;  // first failure, empty when passed
  std::string to_string() const;
};

// Suites accepted by Engine::check.
const std::vector<std::string>& check_suites();

// Owns the computed stores for one configuration. Everything is computed on first use.
class Engine {
 public:
  explicit Engine(RunConfig config);
  ~Engine();

  const RunConfig& config() const { return config_; }

  const CorrelatorStore& correlators();
  const QCorrelatorStore& q_correlators();
  // F from solve_F (the constraint oracle).
  const TruncatedFreeEnergy& oracle();
  // F read off the recursion output.
  const TruncatedFreeEnergy& recursion_free_energy();

  // Rendered in the configured format. Unstable keys need allow_unstable and come from the base table.
  std::string correlator(const CorrelatorKey& key, bool allow_unstable);
  CheckReport check(const std::string& suite);
  Table table();
  std::string render_table();
  // what: correlators | table | q-correlators | q-symmetry
  std::string export_data(const std::string& what);

 private:
  struct State;
  RunConfig config_;
  std::unique_ptr<State> state_;
};

}  // namespace otr
