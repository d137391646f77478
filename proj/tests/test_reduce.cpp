#include "doctest.h"

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "certainsync/errors.hpp"
#include "certainsync/hashing.hpp"
#include "certainsync/reduce.hpp"
#include "certainsync/u256.hpp"
#include "oracles.hpp"

using namespace certainsync;

namespace {

template <typename E>
std::vector<E> sorted(std::vector<E> v) {
  std::sort(v.begin(), v.end());
  return v;
}

std::vector<std::uint64_t> distinct_values(std::mt19937_64& rng, std::size_t count) {
  std::set<std::uint64_t> seen;
  while (seen.size() < count) {
    std::uint64_t v = rng();
    if (v != 0) seen.insert(v);
  }
  return {seen.begin(), seen.end()};
}

struct SplitSets {
  std::vector<std::uint64_t> set1, set2, only1, only2;
};

SplitSets split_sets(std::mt19937_64& rng, std::size_t shared, std::size_t a_only,
                     std::size_t b_only) {
  auto all = distinct_values(rng, shared + a_only + b_only);
  std::shuffle(all.begin(), all.end(), rng);
  SplitSets s;
  s.only1.assign(all.begin(), all.begin() + a_only);
  s.only2.assign(all.begin() + a_only, all.begin() + a_only + b_only);
  s.set1 = s.only1;
  s.set2 = s.only2;
  s.set1.insert(s.set1.end(), all.begin() + a_only + b_only, all.end());
  s.set2.insert(s.set2.end(), all.begin() + a_only + b_only, all.end());
  return s;
}

}  // namespace

TEST_CASE("reduced universe size: collision budget and power-of-two floor") {
  CHECK(reduced_universe_size(100, 1) == 4950);     // 100*99/2 pairs, one allowed collision
  CHECK(reduced_universe_size(1, 1) == 1);
  CHECK(reduced_universe_size(1, 1000) == 1);
  CHECK(reduced_universe_size(0, 1) == 1);
  CHECK(reduced_universe_size(10'000, 100) == 499'950);
  // When the collision budget is generous the power-of-two floor dominates.
  CHECK(reduced_universe_size(100, 1'000'000) == 128);
  CHECK(reduced_universe_size(1000, 1000) == 1024);
  CHECK_THROWS_AS(reduced_universe_size(100, 0), ConfigError);

  for (std::uint64_t m : {2ull, 10ull, 100ull, 5000ull}) {
    for (std::uint64_t delta : {1ull, 5ull, 100ull}) {
      std::uint64_t n_r = reduced_universe_size(m, delta);
      CAPTURE(m);
      CAPTURE(delta);
      // The budget is honored...
      CHECK(expected_collisions(m, n_r) <= static_cast<double>(delta));
      // ...and the universe never drops below the next power of two.
      CHECK(n_r >= std::uint64_t{1} << (64 - __builtin_clzll(m - 1)));
    }
  }
}

TEST_CASE("expected collisions match the closed form") {
  CHECK(expected_collisions(2, 1) == doctest::Approx(1.0));
  CHECK(expected_collisions(100, 4950) == doctest::Approx(1.0));
  CHECK(expected_collisions(1000, 1'000'000) == doctest::Approx(0.4995));
  CHECK(expected_collisions(0, 10) == doctest::Approx(0.0));
  CHECK(expected_collisions(1, 10) == doctest::Approx(0.0));
}

TEST_CASE("round salts come from the shared deterministic stream") {
  const auto& goldens = oracles::splitmix_goldens();
  CHECK(salt_for_round(0, 1) == goldens[0]);
  CHECK(salt_for_round(0, 2) == goldens[1]);
  CHECK(salt_for_round(0, 3) == goldens[2]);
  CHECK(salt_for_round(99, 1) == salt_for_round(99, 1));
  CHECK(salt_for_round(99, 1) != salt_for_round(99, 2));
  CHECK(salt_for_round(99, 1) != salt_for_round(100, 1));
}

TEST_CASE("reduce_element projects through the salted hash into [1, n_r]") {
  for (std::uint64_t e : {1ull, 42ull, 0xdeadbeefcafe1234ull}) {
    std::uint8_t buf[8];
    ElementTraits<std::uint64_t>::write_be(e, buf);
    std::uint64_t h = salted_hash_bytes(buf, sizeof buf, oracles::kSaltGolden);
    for (std::uint64_t n_r : {1ull, 7ull, 4950ull}) {
      CHECK(reduce_element(e, oracles::kSaltGolden, n_r) == h % n_r + 1);
      std::uint64_t r = reduce_element(e, oracles::kSaltGolden, n_r);
      CHECK(r >= 1);
      CHECK(r <= n_r);
    }
  }
  // 256-bit originals use their 32-byte encoding.
  u256 wide = u256::from_hex("00000000000000000000000000000000000000000000000000000000deadbeef");
  std::uint8_t wbuf[32];
  wide.write_be(wbuf);
  CHECK(reduce_element(wide, 7, 1000) == salted_hash_bytes(wbuf, sizeof wbuf, 7) % 1000 + 1);
}

TEST_CASE("certain_mapping groups originals by their reduced value") {
  std::mt19937_64 rng(3);
  auto values = distinct_values(rng, 200);
  const std::uint64_t n_r = 64;  // small universe forces collisions
  auto mapping = certain_mapping(values, 12345, n_r);

  CHECK(std::is_sorted(mapping.reduced_set.begin(), mapping.reduced_set.end()));
  CHECK(std::adjacent_find(mapping.reduced_set.begin(), mapping.reduced_set.end()) ==
        mapping.reduced_set.end());
  CHECK(mapping.reduced_set.size() == mapping.originals_of.size());
  CHECK(mapping.reduced_set.size() <= n_r);

  std::size_t total = 0;
  for (auto r : mapping.reduced_set) {
    const auto& group = mapping.originals_of.at(r);
    total += group.size();
    for (const auto& e : group) CHECK(reduce_element(e, 12345, n_r) == r);
  }
  CHECK(total == values.size());

  // A singleton universe folds everything into one value.
  auto folded = certain_mapping(values, 1, 1);
  CHECK(folded.reduced_set == std::vector<std::uint64_t>{1});
  CHECK(folded.originals_of.at(1).size() == values.size());
}

TEST_CASE("set digests are order-independent fingerprints") {
  std::vector<std::uint64_t> a{5, 9, 1000};
  std::vector<std::uint64_t> b{1000, 5, 9};
  CHECK(digest(a) == digest(b));
  CHECK(digest(a).cardinality == 3);
  std::vector<std::uint64_t> c{5, 9, 1001};
  CHECK(digest(a) != digest(c));
  CHECK(digest(std::vector<std::uint64_t>{}).cardinality == 0);
  CHECK(digest(std::vector<std::uint64_t>{}).xor_hash == 0);

  std::vector<u256> w{u256::from_u64(5)};
  CHECK(digest(w).xor_hash == checksum_of(u256::from_u64(5)));
}

TEST_CASE("identical sets settle in a single round with no transfers") {
  std::mt19937_64 rng(17);
  auto values = distinct_values(rng, 500);
  auto set1 = values, set2 = values;
  auto outcome = universe_reduce_sync<std::uint64_t>(set1, set2, 1, Family::EGH, 7);
  CHECK(outcome.rounds == 1);
  CHECK(outcome.receiver_only.empty());
  CHECK(outcome.sender_only.empty());
  CHECK(sorted(set1) == sorted(values));
  CHECK(sorted(set2) == sorted(values));
}

TEST_CASE("universe reduction reconciles full-range values with both inner families") {
  for (Family family : {Family::EGH, Family::OLS}) {
    std::mt19937_64 rng(family == Family::EGH ? 21 : 22);
    auto s = split_sets(rng, /*shared=*/1000, /*a_only=*/9, /*b_only=*/11);
    auto outcome = universe_reduce_sync<std::uint64_t>(s.set1, s.set2, 1, family, 5);
    CAPTURE(family_name(family));
    CHECK(sorted(outcome.sender_only) == sorted(s.only1));
    CHECK(sorted(outcome.receiver_only) == sorted(s.only2));
    auto expect = sorted(s.set1);
    CHECK(sorted(s.set2) == expect);
    CHECK(outcome.rounds >= 1);
    CHECK(outcome.rounds <= kDefaultRoundCap);
    // Inner traffic is always native 24-byte cells.
    CHECK(outcome.bits_on_wire == outcome.cells_used * 24 * 8);
    CHECK(outcome.wire_bytes > outcome.bits_on_wire / 8);
  }
}

TEST_CASE("superset direction: receiver holds everything already") {
  std::mt19937_64 rng(31);
  auto s = split_sets(rng, 800, 0, 25);
  auto outcome = universe_reduce_sync<std::uint64_t>(s.set1, s.set2, 1, Family::EGH, 9);
  CHECK(outcome.sender_only.empty());
  CHECK(sorted(outcome.receiver_only) == sorted(s.only2));
  CHECK(sorted(s.set1) == sorted(s.set2));
}

TEST_CASE("256-bit originals travel back through the originals exchange") {
  std::mt19937_64 rng(41);
  std::vector<u256> shared, set1, set2, only1, only2;
  auto fresh = [&rng] {
    u256 v;
    for (auto& limb : v.limbs) limb = rng();
    return v;
  };
  for (int i = 0; i < 600; ++i) shared.push_back(fresh());
  set1 = shared;
  set2 = shared;
  for (int i = 0; i < 7; ++i) {
    only1.push_back(fresh());
    set1.push_back(only1.back());
  }
  for (int i = 0; i < 5; ++i) {
    only2.push_back(fresh());
    set2.push_back(only2.back());
  }
  auto outcome = universe_reduce_sync<u256>(set1, set2, 1, Family::EGH, 13);
  CHECK(sorted(outcome.sender_only) == sorted(only1));
  CHECK(sorted(outcome.receiver_only) == sorted(only2));
  CHECK(sorted(set1) == sorted(set2));
  // Reduced cells stay 24 bytes even though the originals are 32-byte values.
  CHECK(outcome.bits_on_wire == outcome.cells_used * 24 * 8);
}

TEST_CASE("a tight collision budget still terminates within the round cap") {
  // delta = m drives the reduced universe down to the power-of-two floor, so
  // collisions hide parts of the difference and extra rounds must recover them.
  std::mt19937_64 rng(51);
  auto s = split_sets(rng, 250, 60, 40);
  std::uint64_t m = s.set1.size() + s.set2.size();
  auto outcome = universe_reduce_sync<std::uint64_t>(s.set1, s.set2, m, Family::EGH, 3);
  CHECK(sorted(outcome.sender_only) == sorted(s.only1));
  CHECK(sorted(outcome.receiver_only) == sorted(s.only2));
  CHECK(sorted(s.set1) == sorted(s.set2));
  CHECK(outcome.rounds <= kDefaultRoundCap);
}

TEST_CASE("OLS rounds where the inner decode gives up heal on a later salt") {
  // Fully disjoint sets crammed into the power-of-two floor: the reduced
  // difference can exceed what the small OLS order can peel, in which case
  // both sides must skip the originals exchange in lockstep and retry under
  // the next salt until a friendlier projection comes up.
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(61);
    auto s = split_sets(rng, 0, 4, 4);
    std::uint64_t m = s.set1.size() + s.set2.size();
    auto outcome = universe_reduce_sync<std::uint64_t>(s.set1, s.set2, m, Family::OLS, seed);
    CAPTURE(seed);
    CHECK(sorted(outcome.sender_only) == sorted(s.only1));
    CHECK(sorted(outcome.receiver_only) == sorted(s.only2));
    CHECK(sorted(s.set1) == sorted(s.set2));
    CHECK(outcome.rounds <= kDefaultRoundCap);
  }
}

TEST_CASE("round cap of zero refuses to run") {
  std::vector<std::uint64_t> a{1, 2}, b{2, 3};
  CHECK_THROWS_AS(universe_reduce_sync<std::uint64_t>(a, b, 1, Family::EGH, 1, 0),
                  RoundLimitExceeded);
}

TEST_CASE("only the EGH and OLS families can run reduced") {
  std::vector<std::uint64_t> a{1, 2}, b{2, 3};
  CHECK_THROWS_AS(universe_reduce_sync<std::uint64_t>(a, b, 1, Family::ExtendedHamming, 1),
                  ConfigError);
}

TEST_CASE("most runs with a one-collision budget finish in one round") {
  // The budget makes a hidden difference element roughly a coin toss per
  // expected collision; across seeds the single-round rate should be high.
  int single = 0;
  const int kTrials = 40;
  for (int t = 0; t < kTrials; ++t) {
    std::mt19937_64 rng(1000 + t);
    auto s = split_sets(rng, 400, 8, 8);
    auto outcome = universe_reduce_sync<std::uint64_t>(s.set1, s.set2, 1, Family::EGH,
                                                       2000 + static_cast<std::uint64_t>(t));
    CHECK(sorted(s.set1) == sorted(s.set2));
    if (outcome.rounds == 1) ++single;
  }
  CHECK(single >= kTrials * 3 / 4);
}
