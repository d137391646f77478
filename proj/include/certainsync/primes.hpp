#pragma once

#include <cstdint>
#include <vector>

namespace certainsync {

// 1-based: nth_prime(1) == 2. Thread-safe; primes are cached across calls.
std::uint64_t nth_prime(std::uint64_t index);

// First k primes, ascending.
std::vector<std::uint64_t> first_primes(std::uint64_t k);

bool is_prime(std::uint64_t v);

// Smallest prime >= v (v >= 0; returns 2 for v <= 2).
std::uint64_t next_prime_at_least(std::uint64_t v);

// Smallest r with r*r >= n.
std::uint64_t ceil_sqrt(std::uint64_t n);

} // namespace certainsync
