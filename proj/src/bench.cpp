#include "certainsync/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "certainsync/reduce.hpp"
#include "certainsync/sync.hpp"

namespace certainsync {

const char* scheme_name(Scheme scheme) {
    switch (scheme) {
        case Scheme::CertainSyncEGH: return "CertainSync-EGH";
        case Scheme::CertainSyncOLS: return "CertainSync-OLS";
        case Scheme::CertainSyncEH: return "CertainSync-EH";
        case Scheme::UniverseReduceSyncEGH: return "UniverseReduceSync-EGH";
        case Scheme::UniverseReduceSyncOLS: return "UniverseReduceSync-OLS";
    }
    throw ConfigError("unknown scheme");
}

std::optional<Scheme> parse_scheme(const std::string& name) {
    for (Scheme s : {Scheme::CertainSyncEGH, Scheme::CertainSyncOLS, Scheme::CertainSyncEH,
                     Scheme::UniverseReduceSyncEGH, Scheme::UniverseReduceSyncOLS}) {
        if (name == scheme_name(s)) return s;
    }
    return std::nullopt;
}

Family scheme_family(Scheme scheme) {
    switch (scheme) {
        case Scheme::CertainSyncEGH:
        case Scheme::UniverseReduceSyncEGH: return Family::EGH;
        case Scheme::CertainSyncOLS:
        case Scheme::UniverseReduceSyncOLS: return Family::OLS;
        case Scheme::CertainSyncEH: return Family::ExtendedHamming;
    }
    throw ConfigError("unknown scheme");
}

bool scheme_uses_reduction(Scheme scheme) {
    return scheme == Scheme::UniverseReduceSyncEGH || scheme == Scheme::UniverseReduceSyncOLS;
}

namespace {

constexpr std::uint64_t kMaxMaterializedUniverse = 20'000'000;

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
    std::uint64_t state = master;
    state ^= splitmix64_next(state) + a;
    state ^= splitmix64_next(state) + b;
    return splitmix64_next(state);
}

// k distinct values of [1, n], order unspecified but deterministic for a given rng.
std::vector<std::uint64_t> sample_distinct(std::uint64_t n, std::uint64_t k,
                                           std::mt19937_64& rng) {
    if (k > n) throw SizesExceedUniverse("cannot draw " + std::to_string(k) + " of " +
                                         std::to_string(n) + " elements");
    if (n > kMaxMaterializedUniverse) {
        throw ConfigError("universe too large to materialize for experiments");
    }
    if (k * 3 >= n) {
        std::vector<std::uint64_t> all(n);
        for (std::uint64_t i = 0; i < n; ++i) all[i] = i + 1;
        for (std::uint64_t i = 0; i < k; ++i) {
            std::uniform_int_distribution<std::uint64_t> pick(i, n - 1);
            std::swap(all[i], all[pick(rng)]);
        }
        all.resize(k);
        return all;
    }
    std::unordered_set<std::uint64_t> seen;
    std::vector<std::uint64_t> out;
    out.reserve(k);
    std::uniform_int_distribution<std::uint64_t> pick(1, n);
    while (out.size() < k) {
        std::uint64_t v = pick(rng);
        if (seen.insert(v).second) out.push_back(v);
    }
    return out;
}

template <typename E>
std::vector<E> sorted_copy(std::vector<E> v) {
    std::sort(v.begin(), v.end());
    return v;
}

// Symmetric difference split by side, from sorted copies.
template <typename E>
std::pair<std::vector<E>, std::vector<E>> side_split(const std::vector<E>& s1,
                                                     const std::vector<E>& s2) {
    std::vector<E> a = sorted_copy(s1), b = sorted_copy(s2);
    std::vector<E> only1, only2;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(only1));
    std::set_difference(b.begin(), b.end(), a.begin(), a.end(), std::back_inserter(only2));
    return {only1, only2};
}

// Runs one plain session in process and reports the receiver's view, keeping
// exhaustion as a status instead of an error so it can land in a CSV row.
template <typename Mapper, typename E = typename Mapper::Element>
ReconOutcomeT<E> drive_plain(const Mapper& mapper, std::vector<E>& set1, std::vector<E>& set2) {
    auto [sender_side, receiver_side] = make_in_memory_pair();
    std::uint64_t session = 0x1f2e3d4c5b6a7988ull;

    std::exception_ptr sender_error;
    std::thread sender([&] {
        try {
            run_sync_sender(*sender_side, session, mapper, set1);
        } catch (...) {
            sender_error = std::current_exception();
        }
    });

    ReconOutcomeT<E> outcome;
    std::exception_ptr receiver_error;
    try {
        outcome = run_sync_receiver(*receiver_side, session, mapper, set2);
    } catch (...) {
        receiver_error = std::current_exception();
    }
    sender.join();
    if (receiver_error) std::rethrow_exception(receiver_error);
    if (sender_error) std::rethrow_exception(sender_error);
    return outcome;
}

ConstructionSpec spec_for(Scheme scheme, std::uint64_t n) {
    switch (scheme_family(scheme)) {
        case Family::EGH: return ConstructionSpec::egh(n);
        case Family::OLS: return ConstructionSpec::ols(n);
        case Family::ExtendedHamming: return ConstructionSpec::extended_hamming(n);
    }
    throw ConfigError("unknown scheme");
}

template <typename E>
void check_recovered(const std::vector<E>& got_receiver_only, const std::vector<E>& got_sender_only,
                     const std::vector<E>& want_sender_view_of_s2,
                     const std::vector<E>& want_receiver_lacks) {
    if (sorted_copy(got_receiver_only) != want_sender_view_of_s2 ||
        sorted_copy(got_sender_only) != want_receiver_lacks) {
        throw Error("recovered difference disagrees with ground truth");
    }
}

} // namespace

std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>> gen_superset_scenario(
    std::uint64_t n, std::uint64_t d, std::mt19937_64& rng) {
    if (d > n) throw SizesExceedUniverse("difference larger than the universe");
    if (n > kMaxMaterializedUniverse) {
        throw ConfigError("universe too large to materialize for experiments");
    }
    std::vector<std::uint64_t> s2(n);
    for (std::uint64_t i = 0; i < n; ++i) s2[i] = i + 1;
    std::vector<std::uint64_t> removed = sample_distinct(n, d, rng);
    std::vector<std::uint64_t> removed_sorted = sorted_copy(removed);
    std::vector<std::uint64_t> s1;
    s1.reserve(n - d);
    std::size_t r = 0;
    for (std::uint64_t v = 1; v <= n; ++v) {
        if (r < removed_sorted.size() && removed_sorted[r] == v) {
            ++r;
            continue;
        }
        s1.push_back(v);
    }
    return {std::move(s1), std::move(s2)};
}

std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>> gen_general_scenario(
    std::uint64_t n, std::uint64_t a_only, std::uint64_t b_only, std::uint64_t shared,
    std::mt19937_64& rng) {
    std::uint64_t total = a_only + b_only + shared;
    if (total > n) throw SizesExceedUniverse("requested sizes exceed the universe");
    std::vector<std::uint64_t> draw = sample_distinct(n, total, rng);
    std::vector<std::uint64_t> s1(draw.begin(), draw.begin() + a_only);
    std::vector<std::uint64_t> s2(draw.begin() + a_only, draw.begin() + a_only + b_only);
    s1.insert(s1.end(), draw.begin() + a_only + b_only, draw.end());
    s2.insert(s2.end(), draw.begin() + a_only + b_only, draw.end());
    return {std::move(s1), std::move(s2)};
}

std::vector<TrialRecord> run_experiment(const ExperimentConfig& config) {
    if (config.trials < 1) throw ConfigError("at least one trial is required");
    if (config.diffs.empty()) throw ConfigError("at least one difference size is required");
    if (config.n < 1) throw ConfigError("the universe must be nonempty");

    std::uint64_t max_d = config.n;
    if (!scheme_uses_reduction(config.scheme)) {
        max_d = std::min(max_d, max_diff_size(spec_for(config.scheme, config.n)));
    }
    for (std::uint64_t d : config.diffs) {
        if (d > config.n) throw ConfigError("difference size exceeds the universe");
        if (!config.allow_beyond_max_diff && d > max_d) {
            throw ConfigError("difference size " + std::to_string(d) +
                              " exceeds the scheme's guaranteed maximum of " +
                              std::to_string(max_d));
        }
    }

    std::vector<TrialRecord> records;
    records.reserve(config.diffs.size() * config.trials);
    for (std::uint64_t d : config.diffs) {
        for (std::uint32_t t = 1; t <= config.trials; ++t) {
            std::uint64_t trial_seed = mix_seed(config.seed, d, t);
            std::mt19937_64 rng(trial_seed);
            auto [s1, s2] = config.scenario == Scenario::Superset
                                ? gen_superset_scenario(config.n, d, rng)
                                : gen_general_scenario(
                                      config.n, d / 2, d - d / 2,
                                      std::min(config.general_shared, config.n - d), rng);
            auto [want_sender_only, want_receiver_only] = side_split(s1, s2);

            TrialRecord rec;
            rec.scheme = scheme_name(config.scheme);
            rec.n = config.n;
            rec.diff = d;
            rec.trial = std::to_string(t);

            auto started = std::chrono::steady_clock::now();
            if (scheme_uses_reduction(config.scheme)) {
                try {
                    ReduceOutcome out =
                        universe_reduce_sync<std::uint64_t>(s1, s2, config.delta_max_collisions,
                                                            scheme_family(config.scheme),
                                                            trial_seed, kDefaultRoundCap);
                    rec.chunks = out.chunks_used;
                    rec.cells = out.cells_used;
                    rec.bits = out.bits_on_wire;
                    rec.rounds = out.rounds;
                    rec.wire_bytes = out.wire_bytes;
                    rec.success = true;
                    check_recovered(out.receiver_only, out.sender_only, want_receiver_only,
                                    want_sender_only);
                } catch (const RoundLimitExceeded&) {
                    rec.success = false;
                    rec.rounds = kDefaultRoundCap;
                }
            } else {
                SpecMapper mapper{spec_for(config.scheme, config.n)};
                ReconOutcome out = drive_plain(mapper, s1, s2);
                rec.chunks = out.chunks_used;
                rec.cells = out.cells_used;
                rec.bits = out.bits_on_wire;
                rec.rounds = 1;
                rec.wire_bytes = out.wire_bytes;
                rec.success = out.status == ReconOutcome::Status::Done;
                if (rec.success) {
                    check_recovered(out.receiver_only, out.sender_only, want_receiver_only,
                                    want_sender_only);
                }
            }
            rec.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                               started)
                         .count();
            records.push_back(std::move(rec));
        }
    }
    return records;
}

namespace {

std::string format_double(double v, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
    return buf;
}

void write_row(std::ostream& out, const TrialRecord& rec) {
    out << rec.scheme << ',' << rec.n << ',' << rec.diff << ',' << rec.trial << ',' << rec.chunks
        << ',' << rec.cells << ',' << rec.bits << ',' << (rec.success ? 1 : 0) << ',' << rec.rounds
        << ',' << format_double(rec.ms, 3) << ',' << rec.wire_bytes << '\n';
}

void write_mean_row(std::ostream& out, const std::vector<TrialRecord>& records, std::size_t begin,
                    std::size_t end) {
    double n = static_cast<double>(end - begin);
    double chunks = 0, cells = 0, bits = 0, success = 0, rounds = 0, ms = 0, wire = 0;
    for (std::size_t i = begin; i < end; ++i) {
        chunks += static_cast<double>(records[i].chunks);
        cells += static_cast<double>(records[i].cells);
        bits += static_cast<double>(records[i].bits);
        success += records[i].success ? 1.0 : 0.0;
        rounds += static_cast<double>(records[i].rounds);
        ms += records[i].ms;
        wire += static_cast<double>(records[i].wire_bytes);
    }
    const TrialRecord& head = records[begin];
    out << head.scheme << ',' << head.n << ',' << head.diff << ",mean,"
        << format_double(chunks / n, 2) << ',' << format_double(cells / n, 2) << ','
        << format_double(bits / n, 2) << ',' << format_double(success / n, 2) << ','
        << format_double(rounds / n, 2) << ',' << format_double(ms / n, 3) << ','
        << format_double(wire / n, 2) << '\n';
}

} // namespace

void write_csv(const std::vector<TrialRecord>& records, std::ostream& out, bool with_means) {
    out << "scheme,n,diff,trial,chunks,cells,bits,success,rounds,ms,wire_bytes\n";
    std::size_t group_begin = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        write_row(out, records[i]);
        bool group_ends = i + 1 == records.size() || records[i + 1].scheme != records[i].scheme ||
                          records[i + 1].n != records[i].n || records[i + 1].diff != records[i].diff;
        if (with_means && group_ends) {
            write_mean_row(out, records, group_begin, i + 1);
            group_begin = i + 1;
        }
    }
}

std::vector<NodePool> load_txpool_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MalformedDataset("cannot open dataset file: " + path);

    std::vector<NodePool> nodes;
    std::unordered_map<std::string, std::size_t> index_of;
    std::unordered_map<std::string, std::set<std::uint64_t>> minutes_of;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto bad = [&](const std::string& why) {
            return MalformedDataset("line " + std::to_string(line_no) + ": " + why);
        };

        std::size_t c1 = line.find(',');
        if (c1 == std::string::npos) throw bad("missing node id separator");
        std::size_t c2 = line.find(',', c1 + 1);
        if (c2 == std::string::npos) throw bad("missing minute separator");
        std::string node_id = line.substr(0, c1);
        if (node_id.empty()) throw bad("empty node id");

        std::uint64_t minute = 0;
        const char* mb = line.data() + c1 + 1;
        const char* me = line.data() + c2;
        auto [ptr, ec] = std::from_chars(mb, me, minute);
        if (ec != std::errc() || ptr != me || mb == me) throw bad("minute is not a number");

        TxPoolSnapshot snapshot;
        snapshot.minute = minute;
        std::set<u256> unique_ids;
        std::size_t pos = c2 + 1;
        while (pos <= line.size()) {
            std::size_t sep = line.find(';', pos);
            std::size_t stop = sep == std::string::npos ? line.size() : sep;
            if (stop > pos) {
                u256 id;
                try {
                    id = u256::from_hex(line.substr(pos, stop - pos));
                } catch (const MalformedDataset& e) {
                    throw bad(e.what());
                }
                if (!unique_ids.insert(id).second) throw bad("duplicate identifier in snapshot");
                snapshot.ids.push_back(id);
            } else if (sep != std::string::npos || stop != line.size()) {
                throw bad("empty identifier");
            }
            if (sep == std::string::npos) break;
            pos = sep + 1;
        }

        if (snapshot.ids.empty()) throw bad("snapshot has no identifiers");

        auto [it, inserted] = index_of.try_emplace(node_id, nodes.size());
        if (inserted) nodes.push_back(NodePool{node_id, {}});
        if (!minutes_of[node_id].insert(minute).second) {
            throw bad("duplicate minute for node " + node_id);
        }
        nodes[it->second].snapshots.push_back(std::move(snapshot));
    }
    return nodes;
}

void write_txpool_dataset(const std::vector<NodePool>& dataset, std::ostream& out) {
    for (const NodePool& node : dataset) {
        for (const TxPoolSnapshot& snapshot : node.snapshots) {
            out << node.node_id << ',' << snapshot.minute << ',';
            for (std::size_t i = 0; i < snapshot.ids.size(); ++i) {
                if (i) out << ';';
                out << snapshot.ids[i].to_hex();
            }
            out << '\n';
        }
    }
}

std::vector<NodePool> gen_txpool_dataset(std::uint64_t seed, std::uint32_t minutes) {
    std::mt19937_64 rng(seed);
    auto fresh_id = [&rng] { return u256{{rng(), rng(), rng(), rng()}}; };

    // Churning shared pool: confirmed-looking core plus a queued backlog.
    std::vector<u256> pool;
    pool.reserve(7000);
    for (int i = 0; i < 4800 + 1024; ++i) pool.push_back(fresh_id());

    std::vector<NodePool> nodes{NodePool{"node1", {}}, NodePool{"node2", {}}};
    std::uniform_int_distribution<std::uint64_t> fresh_count(300, 400);
    std::uniform_int_distribution<std::uint64_t> missing_count(20, 180);

    for (std::uint32_t minute = 1; minute <= minutes; ++minute) {
        std::uint64_t fresh = fresh_count(rng);
        for (std::uint64_t i = 0; i < fresh; ++i) pool.push_back(fresh_id());
        if (pool.size() > 6100) {
            std::uniform_int_distribution<std::size_t> keep(5400, 5900);
            std::size_t target = keep(rng);
            pool.erase(pool.begin(), pool.begin() + (pool.size() - target));
        }

        for (NodePool& node : nodes) {
            std::mt19937_64 node_rng(rng());
            std::uint64_t missing = missing_count(node_rng);
            std::vector<std::uint64_t> skip =
                sample_distinct(pool.size(), std::min<std::uint64_t>(missing, pool.size()),
                                node_rng);
            std::vector<bool> skipped(pool.size(), false);
            for (std::uint64_t idx : skip) skipped[idx - 1] = true;

            TxPoolSnapshot snapshot;
            snapshot.minute = minute;
            snapshot.ids.reserve(pool.size() - skip.size());
            for (std::size_t i = 0; i < pool.size(); ++i) {
                if (!skipped[i]) snapshot.ids.push_back(pool[i]);
            }
            node.snapshots.push_back(std::move(snapshot));
        }
    }
    return nodes;
}

std::vector<TrialRecord> run_txpool(const std::vector<NodePool>& dataset,
                                    std::uint64_t delta_max_collisions, std::uint64_t seed) {
    if (dataset.size() < 2) throw MalformedDataset("the pool workload needs two nodes");

    std::map<std::uint64_t, const TxPoolSnapshot*> by_minute_1, by_minute_2;
    for (const TxPoolSnapshot& s : dataset[0].snapshots) by_minute_1[s.minute] = &s;
    for (const TxPoolSnapshot& s : dataset[1].snapshots) by_minute_2[s.minute] = &s;

    std::vector<TrialRecord> records;
    for (const auto& [minute, snap1] : by_minute_1) {
        auto it = by_minute_2.find(minute);
        if (it == by_minute_2.end()) continue;
        const TxPoolSnapshot* snap2 = it->second;

        auto [want_sender_only, want_receiver_only] = side_split(snap1->ids, snap2->ids);
        std::uint64_t diff = want_sender_only.size() + want_receiver_only.size();

        {
            TrialRecord rec;
            rec.scheme = scheme_name(Scheme::CertainSyncEGH);
            rec.n = 0;
            rec.diff = diff;
            rec.trial = std::to_string(minute);
            std::vector<u256> s1 = snap1->ids, s2 = snap2->ids;
            auto started = std::chrono::steady_clock::now();
            RawReconOutcome out = drive_plain(RawEghMapper{}, s1, s2);
            rec.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                               started)
                         .count();
            rec.chunks = out.chunks_used;
            rec.cells = out.cells_used;
            rec.bits = out.bits_on_wire;
            rec.rounds = 1;
            rec.wire_bytes = out.wire_bytes;
            rec.success = out.status == RawReconOutcome::Status::Done;
            if (rec.success) {
                check_recovered(out.receiver_only, out.sender_only, want_receiver_only,
                                want_sender_only);
            }
            records.push_back(std::move(rec));
        }
        {
            TrialRecord rec;
            rec.scheme = scheme_name(Scheme::UniverseReduceSyncEGH);
            rec.n = 0;
            rec.diff = diff;
            rec.trial = std::to_string(minute);
            std::vector<u256> s1 = snap1->ids, s2 = snap2->ids;
            auto started = std::chrono::steady_clock::now();
            RawReduceOutcome out = universe_reduce_sync<u256>(
                s1, s2, delta_max_collisions, Family::EGH, mix_seed(seed, minute, 0),
                kDefaultRoundCap);
            rec.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                               started)
                         .count();
            rec.chunks = out.chunks_used;
            rec.cells = out.cells_used;
            rec.bits = out.bits_on_wire;
            rec.rounds = out.rounds;
            rec.wire_bytes = out.wire_bytes;
            rec.success = true;
            check_recovered(out.receiver_only, out.sender_only, want_receiver_only,
                            want_sender_only);
            records.push_back(std::move(rec));
        }
    }
    return records;
}

} // namespace certainsync
