#include "doctest.h"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "certainsync/bench.hpp"
#include "certainsync/errors.hpp"
#include "certainsync/sync.hpp"
#include "certainsync/u256.hpp"

using namespace certainsync;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

// Replaces the ms column (second to last) with a placeholder so timing noise
// does not break byte-for-byte comparisons.
std::string mask_ms(const std::string& csv) {
  std::string out;
  for (const auto& line : lines_of(csv)) {
    auto last = line.rfind(',');
    auto prev = line.rfind(',', last == std::string::npos ? last : last - 1);
    if (last == std::string::npos || prev == std::string::npos || line.rfind("scheme,", 0) == 0) {
      out += line;
    } else {
      out += line.substr(0, prev + 1) + "MS" + line.substr(last);
    }
    out += '\n';
  }
  return out;
}

std::string csv_of(const std::vector<TrialRecord>& records, bool with_means = true) {
  std::ostringstream out;
  write_csv(records, out, with_means);
  return out.str();
}

}  // namespace

TEST_CASE("scheme names parse and print consistently") {
  for (Scheme s : {Scheme::CertainSyncEGH, Scheme::CertainSyncOLS, Scheme::CertainSyncEH,
                   Scheme::UniverseReduceSyncEGH, Scheme::UniverseReduceSyncOLS}) {
    auto parsed = parse_scheme(scheme_name(s));
    REQUIRE(parsed.has_value());
    CHECK(*parsed == s);
  }
  CHECK(scheme_name(Scheme::CertainSyncEGH) == std::string("CertainSync-EGH"));
  CHECK(scheme_name(Scheme::UniverseReduceSyncOLS) == std::string("UniverseReduceSync-OLS"));
  CHECK(!parse_scheme("NoSuchScheme").has_value());
  CHECK(scheme_family(Scheme::CertainSyncEH) == Family::ExtendedHamming);
  CHECK(scheme_family(Scheme::UniverseReduceSyncOLS) == Family::OLS);
  CHECK(scheme_uses_reduction(Scheme::UniverseReduceSyncEGH));
  CHECK(!scheme_uses_reduction(Scheme::CertainSyncEGH));
}

TEST_CASE("superset scenario: S2 is the universe, S1 lacks exactly d elements") {
  std::mt19937_64 rng(5);
  auto [s1, s2] = gen_superset_scenario(1000, 17, rng);
  CHECK(s2.size() == 1000);
  CHECK(s1.size() == 983);
  std::set<std::uint64_t> u2(s2.begin(), s2.end());
  CHECK(u2.size() == 1000);
  CHECK(*u2.begin() == 1);
  CHECK(*u2.rbegin() == 1000);
  std::set<std::uint64_t> u1(s1.begin(), s1.end());
  CHECK(u1.size() == 983);
  for (auto e : s1) CHECK(u2.count(e));
}

TEST_CASE("general scenario: controlled one-sided and shared portions") {
  std::mt19937_64 rng(6);
  auto [s1, s2] = gen_general_scenario(100000, 12, 8, 500, rng);
  CHECK(s1.size() == 512);
  CHECK(s2.size() == 508);
  std::set<std::uint64_t> u1(s1.begin(), s1.end()), u2(s2.begin(), s2.end());
  CHECK(u1.size() == s1.size());
  CHECK(u2.size() == s2.size());
  std::vector<std::uint64_t> only1, only2;
  std::set_difference(u1.begin(), u1.end(), u2.begin(), u2.end(), std::back_inserter(only1));
  std::set_difference(u2.begin(), u2.end(), u1.begin(), u1.end(), std::back_inserter(only2));
  CHECK(only1.size() == 12);
  CHECK(only2.size() == 8);
  for (auto e : u1) {
    CHECK(e >= 1);
    CHECK(e <= 100000);
  }
}

TEST_CASE("scenario generation rejects impossible requests") {
  std::mt19937_64 rng(7);
  CHECK_THROWS_AS(gen_superset_scenario(10, 11, rng), SizesExceedUniverse);
  CHECK_THROWS_AS(gen_general_scenario(10, 5, 5, 1, rng), SizesExceedUniverse);
}

TEST_CASE("experiments of every scheme succeed and agree with their config") {
  for (Scheme scheme : {Scheme::CertainSyncEGH, Scheme::CertainSyncOLS, Scheme::CertainSyncEH,
                        Scheme::UniverseReduceSyncEGH, Scheme::UniverseReduceSyncOLS}) {
    ExperimentConfig config;
    config.scheme = scheme;
    config.n = 2000;
    config.diffs = {1, 3};
    config.trials = 4;
    config.seed = 9;
    auto records = run_experiment(config);
    CAPTURE(scheme_name(scheme));
    REQUIRE(records.size() == 8);
    for (const auto& r : records) {
      CHECK(r.scheme == scheme_name(scheme));
      CHECK(r.n == 2000);
      CHECK(r.success);
      CHECK(r.cells > 0);
      CHECK(r.chunks > 0);
      CHECK(r.wire_bytes > 0);
      CHECK(r.bits == r.cells * 24 * 8);
      if (!scheme_uses_reduction(scheme)) CHECK(r.rounds == 1);
    }
    CHECK(records[0].trial == "1");
    CHECK(records[3].trial == "4");
    CHECK(records[0].diff == 1);
    CHECK(records[4].diff == 3);
  }
}

TEST_CASE("experiment records are deterministic for a fixed seed") {
  ExperimentConfig config;
  config.scheme = Scheme::UniverseReduceSyncEGH;
  config.n = 3000;
  config.diffs = {5};
  config.trials = 3;
  config.seed = 123;
  auto a = run_experiment(config);
  auto b = run_experiment(config);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].cells == b[i].cells);
    CHECK(a[i].chunks == b[i].chunks);
    CHECK(a[i].bits == b[i].bits);
    CHECK(a[i].rounds == b[i].rounds);
    CHECK(a[i].wire_bytes == b[i].wire_bytes);
    CHECK(a[i].success == b[i].success);
  }
  CHECK(mask_ms(csv_of(a)) == mask_ms(csv_of(b)));
}

TEST_CASE("different seeds shuffle the sampled differences") {
  ExperimentConfig config;
  config.scheme = Scheme::CertainSyncEGH;
  config.n = 100000;
  config.diffs = {20};
  config.trials = 4;
  config.seed = 1;
  auto a = run_experiment(config);
  config.seed = 2;
  auto b = run_experiment(config);
  bool any_difference = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].cells != b[i].cells || a[i].wire_bytes != b[i].wire_bytes) any_difference = true;
  }
  CHECK(any_difference);
}

TEST_CASE("config validation") {
  ExperimentConfig config;
  config.diffs = {1};
  config.trials = 0;
  CHECK_THROWS_AS(run_experiment(config), ConfigError);
  config.trials = 1;
  config.diffs = {};
  CHECK_THROWS_AS(run_experiment(config), ConfigError);
  config.diffs = {1};
  config.n = 0;
  CHECK_THROWS_AS(run_experiment(config), ConfigError);

  // Differences beyond the construction's guarantee are rejected unless the
  // caller explicitly asks for the success-curve behavior.
  ExperimentConfig eh;
  eh.scheme = Scheme::CertainSyncEH;
  eh.n = 1000;
  eh.diffs = {4};
  eh.trials = 2;
  CHECK_THROWS_AS(run_experiment(eh), ConfigError);
  eh.allow_beyond_max_diff = true;
  auto records = run_experiment(eh);
  REQUIRE(records.size() == 2);
  // A diff of 4 may or may not peel opportunistically, but it must never be
  // reported as success without actually reconciling.
  for (const auto& r : records) CHECK(r.chunks <= 3);

  // A diff larger than the universe is impossible no matter what.
  eh.diffs = {2000};
  CHECK_THROWS_AS(run_experiment(eh), ConfigError);
}

TEST_CASE("OLS table row: an adversarial pair decodes exactly at two chunks") {
  // Elements 1 and 2 share the chunk-1 row, so the decode first succeeds at
  // level 2, using 2s cells.
  std::vector<std::uint64_t> set1, set2;
  for (std::uint64_t e = 1; e <= 3000; ++e) set2.push_back(e);
  set1 = set2;
  set1.erase(std::remove(set1.begin(), set1.end(), 1), set1.end());
  set1.erase(std::remove(set1.begin(), set1.end(), 2), set1.end());
  auto outcome = reconcile_in_memory(ConstructionSpec::ols(1'000'000), set1, set2);
  CHECK(outcome.chunks_used == 2);
  CHECK(outcome.cells_used == 2 * 1009);
  CHECK(outcome.bits_on_wire == 2 * 1009 * 24 * 8);
}

TEST_CASE("CSV shape: header, trial rows, and mean rows per group") {
  ExperimentConfig config;
  config.scheme = Scheme::CertainSyncEGH;
  config.n = 500;
  config.diffs = {1, 2};
  config.trials = 3;
  config.seed = 77;
  auto records = run_experiment(config);
  auto csv = csv_of(records);
  auto lines = lines_of(csv);
  REQUIRE(lines.size() == 1 + 6 + 2);
  CHECK(lines[0] == "scheme,n,diff,trial,chunks,cells,bits,success,rounds,ms,wire_bytes");
  CHECK(lines[1].rfind("CertainSync-EGH,500,1,1,", 0) == 0);
  CHECK(lines[4].rfind("CertainSync-EGH,500,1,mean,", 0) == 0);
  CHECK(lines[8].rfind("CertainSync-EGH,500,2,mean,", 0) == 0);

  // Trial rows carry integer columns; the mean row keeps two decimals.
  std::regex trial_row(
      R"(CertainSync-EGH,500,1,1,\d+,\d+,\d+,1,1,\d+\.\d{3},\d+)");
  CHECK(std::regex_match(lines[1], trial_row));
  std::regex mean_row(
      R"(CertainSync-EGH,500,1,mean,\d+\.\d{2},\d+\.\d{2},\d+\.\d{2},\d+\.\d{2},\d+\.\d{2},\d+\.\d{3},\d+\.\d{2})");
  CHECK(std::regex_match(lines[4], mean_row));

  // Without means: one line per record plus the header.
  auto flat = lines_of(csv_of(records, false));
  CHECK(flat.size() == 1 + records.size());
}

TEST_CASE("pool dataset: write and load round-trip exactly") {
  auto dataset = gen_txpool_dataset(3, 4);
  REQUIRE(dataset.size() == 2);
  std::ostringstream out;
  write_txpool_dataset(dataset, out);
  auto text = out.str();

  // Loading happens from a file path.
  std::string path = "/tmp/certainsync_test_pool.csv";
  {
    std::ofstream file(path);
    file << text;
  }
  auto back = load_txpool_dataset(path);
  REQUIRE(back.size() == dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    CHECK(back[i].node_id == dataset[i].node_id);
    REQUIRE(back[i].snapshots.size() == dataset[i].snapshots.size());
    for (std::size_t j = 0; j < dataset[i].snapshots.size(); ++j) {
      CHECK(back[i].snapshots[j].minute == dataset[i].snapshots[j].minute);
      CHECK(back[i].snapshots[j].ids == dataset[i].snapshots[j].ids);
    }
  }
}

TEST_CASE("pool dataset loader rejects malformed lines with a line number") {
  auto expect_bad = [](const std::string& content, const char* why) {
    std::string path = "/tmp/certainsync_bad_pool.csv";
    {
      std::ofstream file(path);
      file << content;
    }
    CAPTURE(why);
    CHECK_THROWS_AS(load_txpool_dataset(path), MalformedDataset);
  };
  const std::string id(64, 'a');
  expect_bad("node1\n", "missing fields");
  expect_bad("node1,notanumber," + id + "\n", "bad minute");
  expect_bad("node1,1,zz\n", "bad identifier");
  expect_bad("node1,1," + id + ";" + id + "\n", "duplicate id");
  expect_bad(",1," + id + "\n", "empty node");
  expect_bad("node1,1," + id + "\nnode1,1," + id + "\n", "duplicate minute");
  expect_bad("node1,1,\n", "empty identifier");
  CHECK_THROWS_AS(load_txpool_dataset("/tmp/definitely_missing_pool_file.csv"),
                  MalformedDataset);
}

TEST_CASE("synthetic pool: two nodes, bounded churn, high overlap") {
  auto dataset = gen_txpool_dataset(11, 12);
  REQUIRE(dataset.size() == 2);
  CHECK(dataset[0].node_id == "node1");
  CHECK(dataset[1].node_id == "node2");
  for (const auto& node : dataset) {
    REQUIRE(node.snapshots.size() == 12);
    for (std::size_t j = 0; j < node.snapshots.size(); ++j) {
      const auto& snap = node.snapshots[j];
      CHECK(snap.minute == j + 1);
      CHECK(snap.ids.size() >= 4000);
      CHECK(snap.ids.size() <= 6500);
      std::set<u256> unique(snap.ids.begin(), snap.ids.end());
      CHECK(unique.size() == snap.ids.size());
    }
  }
  // The two views of any minute differ, but only by a small fraction.
  for (std::size_t j = 0; j < 12; ++j) {
    const auto& a = dataset[0].snapshots[j].ids;
    const auto& b = dataset[1].snapshots[j].ids;
    std::set<u256> ua(a.begin(), a.end()), ub(b.begin(), b.end());
    std::vector<u256> sym;
    std::set_symmetric_difference(ua.begin(), ua.end(), ub.begin(), ub.end(),
                                  std::back_inserter(sym));
    CHECK(sym.size() > 0);
    CHECK(sym.size() < 400);
  }
}

TEST_CASE("pool replay emits paired rows with honest per-scheme bit widths") {
  auto dataset = gen_txpool_dataset(13, 3);
  auto records = run_txpool(dataset, 1, 21);
  REQUIRE(records.size() == 6);  // two schemes per common minute
  for (std::size_t i = 0; i < records.size(); i += 2) {
    const auto& raw = records[i];
    const auto& reduced = records[i + 1];
    CHECK(raw.scheme == "CertainSync-EGH");
    CHECK(reduced.scheme == "UniverseReduceSync-EGH");
    // Raw mode has no materialized universe; its marker is n = 0, and its
    // cells carry full 256-bit identifiers: 72 bytes each.
    CHECK(raw.n == 0);
    CHECK(raw.bits == raw.cells * 72 * 8);
    CHECK(reduced.bits == reduced.cells * 24 * 8);
    CHECK(raw.trial == reduced.trial);
    CHECK(raw.diff == reduced.diff);
    CHECK(raw.success);
    CHECK(reduced.success);
    CHECK(raw.diff > 0);
  }
  // Minutes label the trial column.
  CHECK(records[0].trial == "1");
  CHECK(records[2].trial == "2");
  CHECK(records[4].trial == "3");

  std::vector<NodePool> single = {dataset[0]};
  CHECK_THROWS_AS(run_txpool(single, 1, 21), MalformedDataset);
}
