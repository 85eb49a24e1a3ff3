#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include <json.hpp>

#include "otr/cache.hpp"
#include "otr/constraints.hpp"
#include "otr/errors.hpp"
#include "otr/numbers.hpp"
#include "otr/recursion.hpp"

using namespace otr;

namespace {

struct Pipelines {
  CorrelatorStore store;
  TruncatedFreeEnergy oracle = solve_F(8);
  Pipelines() { compute_all(8, store, 2); }
};

const Pipelines& pipelines() {
  static const Pipelines p;
  return p;
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("otr-test-" + name + "-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("anchored brackets") {
  const auto& p = pipelines();
  const IntersectionIndex tau0_cubed{0, {0, 0, 0}, {}};
  CHECK(extract_number(tau0_cubed, p.store, 8).value == Rational(1));
  CHECK(extract_number(tau0_cubed, p.oracle).value == Rational(1));
  const IntersectionIndex sigma0_cubed{1, {}, {0, 0, 0}};
  CHECK(extract_number(sigma0_cubed, p.store, 8).value == Rational(1));
  CHECK(extract_number(IntersectionIndex{1, {0}, {0}}, p.store, 8).value == Rational(1));
  CHECK(extract_number(IntersectionIndex{0, {0, 0, 0, 1}, {}}, p.store, 8).value == Rational(1));
  CHECK(extract_number(IntersectionIndex{0, {0, 0, 0, 0, 2}, {}}, p.store, 8).value == Rational(1));
  // Mixed closed and open value at h = 1; the closed part 1/24 is read from the Q-graded output.
  CHECK(extract_number(IntersectionIndex{2, {1}, {}}, p.store, 8).value == Rational(13, 24));
}

TEST_CASE("dimension violations and budget") {
  const auto& p = pipelines();
  const auto bad = extract_number(IntersectionIndex{1, {1}, {}}, p.store, 8);
  CHECK(bad.dimension_violation);
  CHECK(bad.value == Rational(0));
  CHECK_THROWS_AS(extract_number(IntersectionIndex{3, {}, {1, 1, 1}}, p.store, 8), ContractError);
  CHECK_THROWS_AS(extract_number(IntersectionIndex{3, {}, {1, 1, 1}}, p.oracle), ContractError);
}

TEST_CASE("brackets do not depend on index order") {
  const auto& p = pipelines();
  const IntersectionIndex a{1, {0, 1}, {0, 1}};
  const IntersectionIndex b{1, {1, 0}, {1, 0}};
  CHECK(extract_number(a, p.store, 8).value == extract_number(b, p.store, 8).value);
}

TEST_CASE("coordinate maps") {
  TPolynomial t1;
  t1.add_term({1}, Rational(1));
  CHECK(to_kp_coordinates(t1).to_string() == "T0");
  TPolynomial t2;
  t2.add_term({2}, Rational(1));
  CHECK(to_kp_coordinates(t2).to_string() == "1/2*S0");
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> index(1, 12);
  std::uniform_int_distribution<int> length(0, 4);
  for (int trial = 0; trial < 30; ++trial) {
    TPolynomial p;
    for (int t = 0; t < 5; ++t) {
      Monomial m;
      for (int i = length(rng); i > 0; --i) m.push_back(index(rng));
      std::sort(m.begin(), m.end());
      p.add_term(m, Rational(index(rng), index(rng)));
    }
    CHECK(from_kp_coordinates(to_kp_coordinates(p)) == p);
  }
}

TEST_CASE("tabulation") {
  const auto& p = pipelines();
  const auto table = tabulate(8, &p.store, &p.oracle);
  REQUIRE_FALSE(table.rows.empty());
  CHECK(table.rows.front().index.to_string() == "<tau_0^3>_0");
  CHECK(table.rows.front().provenance == "both-agree");
  for (const auto& row : table.rows) CHECK(row.provenance == "both-agree");
  CHECK(table.rows.size() == 99);
  CHECK(tabulate(2, &p.store, &p.oracle).rows.empty());
  CHECK(table_to_csv(tabulate(2, &p.store, &p.oracle)) == "h,interior,boundary,value,provenance\n");
  CHECK(tabulate(8, &p.store, nullptr).rows.front().provenance == "recursion");
  CHECK(tabulate(8, nullptr, &p.oracle).rows.front().provenance == "oracle");
}

TEST_CASE("disagreeing pipelines are an error") {
  const auto& p = pipelines();
  TruncatedFreeEnergy wrong = p.oracle;
  wrong.set({1, 1, 1}, Rational(1, 3));
  CHECK_THROWS_AS(tabulate(8, &p.store, &wrong), InconsistencyError);
}

TEST_CASE("exports") {
  const auto& p = pipelines();
  const auto table = tabulate(4, &p.store, &p.oracle);
  CHECK(table_to_csv(table) ==
        "h,interior,boundary,value,provenance\n0,0 0 0,,1,both-agree\n0,0 0 0 1,,1,both-agree\n1/2,0,0,1,both-agree\n");
  const auto json = nlohmann::json::parse(table_to_json(table));
  CHECK(json["version"] == kExportFormatVersion);
  CHECK(json["rows"][0]["h"] == 0);
  CHECK(json["rows"][2]["h"] == "1/2");
  CHECK(json["rows"][0]["value"]["num"] == "1");
  CHECK(json["rows"][0]["value"]["den"] == "1");
  const auto correlators = nlohmann::json::parse(correlators_to_json(p.store, 8));
  CHECK(correlators["correlators"].size() == 17);
  CHECK(correlators["correlators"][5]["text"] == "13/8 * z1^-4 dz1");
}

TEST_CASE("cache records round trip") {
  const auto& p = pipelines();
  for (const auto& key : stable_keys(8)) {
    const auto bytes = encode_record(key, *p.store.find(key));
    CHECK(bytes.substr(0, 4) == "OTRC");
    CHECK(decode_record(key, bytes) == *p.store.find(key));
  }
}

TEST_CASE("damaged cache records are rejected") {
  const auto& p = pipelines();
  const CorrelatorKey key{2, 2};
  const auto bytes = encode_record(key, *p.store.find(key));
  CHECK_THROWS_AS(decode_record(CorrelatorKey{2, 3}, bytes), IoError);
  CHECK_THROWS_AS(decode_record(key, bytes.substr(0, bytes.size() - 1)), IoError);
  CHECK_THROWS_AS(decode_record(key, bytes + "x"), IoError);
  std::string flipped = bytes;
  flipped[flipped.size() - 1] = static_cast<char>(flipped.back() ^ 1);
  CHECK_THROWS_AS(decode_record(key, flipped), IoError);
  CHECK_THROWS_AS(decode_record(key, "OTRD"), IoError);
}

TEST_CASE("cache directory") {
  const auto dir = scratch_dir("cache");
  const auto& p = pipelines();
  {
    CorrelatorCache cache(dir);
    CHECK_FALSE(cache.load({0, 3}).has_value());
    cache.save({0, 3}, *p.store.find({0, 3}));
    CHECK(*cache.load({0, 3}) == *p.store.find({0, 3}));
    CHECK(std::filesystem::exists(dir / "W_0_3.otrc"));
  }
  CHECK(resolve_cache_dir("/x") == "/x");
  std::filesystem::remove_all(dir);
}
