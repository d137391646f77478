#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "certainsync/construction.hpp"
#include "certainsync/u256.hpp"

namespace certainsync {

enum class Scheme {
    CertainSyncEGH,
    CertainSyncOLS,
    CertainSyncEH,
    UniverseReduceSyncEGH,
    UniverseReduceSyncOLS,
};

const char* scheme_name(Scheme scheme);
std::optional<Scheme> parse_scheme(const std::string& name);
Family scheme_family(Scheme scheme);
bool scheme_uses_reduction(Scheme scheme);

enum class Scenario { Superset, General };

struct ExperimentConfig {
    Scheme scheme = Scheme::CertainSyncEGH;
    std::uint64_t n = 1000;
    std::vector<std::uint64_t> diffs;
    std::uint32_t trials = 10;
    Scenario scenario = Scenario::Superset;
    std::uint64_t delta_max_collisions = 1;
    std::uint64_t seed = 1;
    std::uint64_t general_shared = 5000; // clamped to n - diff per trial
    bool allow_beyond_max_diff = false;  // success-curve mode records failures
};

struct TrialRecord {
    std::string scheme;
    std::uint64_t n = 0; // 0 marks the raw 256-bit identifier universe
    std::uint64_t diff = 0;
    std::string trial; // 1-based index, or the snapshot minute for pool runs
    std::uint64_t chunks = 0;
    std::uint64_t cells = 0;
    std::uint64_t bits = 0; // cells x the cell width the scheme puts on the wire
    bool success = true;
    std::uint32_t rounds = 1;
    double ms = 0.0;
    std::uint64_t wire_bytes = 0; // full frame traffic, both directions
};

// S2 is the whole universe, S1 lacks d random elements; the symmetric
// difference is exactly d.
std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>> gen_superset_scenario(
    std::uint64_t n, std::uint64_t d, std::mt19937_64& rng);

// Disjoint random draws: a_only + b_only + shared distinct elements of [1, n].
std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>> gen_general_scenario(
    std::uint64_t n, std::uint64_t a_only, std::uint64_t b_only, std::uint64_t shared,
    std::mt19937_64& rng);

std::vector<TrialRecord> run_experiment(const ExperimentConfig& config);

// Trial rows as given, plus one "mean" row per consecutive (scheme, n, diff)
// group when with_means is set (pool runs skip means: one trial per minute).
void write_csv(const std::vector<TrialRecord>& records, std::ostream& out, bool with_means = true);

struct TxPoolSnapshot {
    std::uint64_t minute = 0;
    std::vector<u256> ids;
};

struct NodePool {
    std::string node_id;
    std::vector<TxPoolSnapshot> snapshots;
};

// One line per snapshot: node_id,minute,hex_id[;hex_id...]
std::vector<NodePool> load_txpool_dataset(const std::string& path);
void write_txpool_dataset(const std::vector<NodePool>& dataset, std::ostream& out);

// Two nodes sharing a churning pool of 256-bit identifiers; pool sizes stay
// within [4000, 6500] and per-minute symmetric differences in the tens to
// low hundreds.
std::vector<NodePool> gen_txpool_dataset(std::uint64_t seed, std::uint32_t minutes);

// Reconciles the two nodes at every common minute, once per scheme: plain
// streaming over raw identifiers (576-bit cells) and universe reduction
// (192-bit cells), both EGH.
std::vector<TrialRecord> run_txpool(const std::vector<NodePool>& dataset,
                                    std::uint64_t delta_max_collisions, std::uint64_t seed);

} // namespace certainsync
