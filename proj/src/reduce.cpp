#include "certainsync/reduce.hpp"

#include <bit>
#include <exception>
#include <thread>

namespace certainsync {

std::uint64_t reduced_universe_size(std::uint64_t m, std::uint64_t delta_max_collisions) {
    if (m == 0) return 1;
    if (delta_max_collisions == 0) throw ConfigError("collision budget must be at least 1");
    std::uint64_t floor_pow2 = std::bit_ceil(m);
    unsigned __int128 pairs2 = static_cast<unsigned __int128>(m) * (m - 1);
    unsigned __int128 denom = static_cast<unsigned __int128>(2) * delta_max_collisions;
    std::uint64_t by_budget = static_cast<std::uint64_t>((pairs2 + denom - 1) / denom);
    return std::max(floor_pow2, by_budget);
}

std::uint64_t salt_for_round(std::uint64_t seed, std::uint32_t round) {
    std::uint64_t state = seed;
    std::uint64_t salt = 0;
    for (std::uint32_t i = 0; i < round; ++i) salt = splitmix64_next(state);
    return salt;
}

double expected_collisions(std::uint64_t m, std::uint64_t n_r) {
    if (n_r == 0) throw ConfigError("reduced universe must be nonempty");
    unsigned __int128 pairs2 = static_cast<unsigned __int128>(m) * (m > 0 ? m - 1 : 0);
    return static_cast<double>(pairs2) / (2.0 * static_cast<double>(n_r));
}

namespace {

template <typename E>
ReduceOutcomeT<E> drive_reduce_pair(std::vector<E>& set1, std::vector<E>& set2,
                                    std::uint64_t delta_max_collisions, Family family,
                                    std::uint64_t seed, std::uint32_t round_cap) {
    auto [sender_side, receiver_side] = make_in_memory_pair();
    std::uint64_t session = 0x7e91c04d52af8b36ull;

    std::exception_ptr sender_error;
    std::thread sender([&] {
        try {
            run_reduce_sender(*sender_side, session, set1, delta_max_collisions, family, seed,
                              round_cap);
        } catch (...) {
            sender_error = std::current_exception();
        }
    });

    ReduceOutcomeT<E> outcome;
    std::exception_ptr receiver_error;
    try {
        outcome = run_reduce_receiver(*receiver_side, session, set2, delta_max_collisions, family,
                                      seed, round_cap);
    } catch (...) {
        receiver_error = std::current_exception();
    }
    sender.join();
    if (receiver_error) std::rethrow_exception(receiver_error);
    if (sender_error) std::rethrow_exception(sender_error);
    return outcome;
}

} // namespace

template <typename E>
ReduceOutcomeT<E> universe_reduce_sync(std::vector<E>& set1, std::vector<E>& set2,
                                       std::uint64_t delta_max_collisions, Family family,
                                       std::uint64_t seed, std::uint32_t round_cap) {
    return drive_reduce_pair(set1, set2, delta_max_collisions, family, seed, round_cap);
}

template ReduceOutcome universe_reduce_sync<std::uint64_t>(std::vector<std::uint64_t>&,
                                                           std::vector<std::uint64_t>&,
                                                           std::uint64_t, Family, std::uint64_t,
                                                           std::uint32_t);
template RawReduceOutcome universe_reduce_sync<u256>(std::vector<u256>&, std::vector<u256>&,
                                                     std::uint64_t, Family, std::uint64_t,
                                                     std::uint32_t);

} // namespace certainsync
