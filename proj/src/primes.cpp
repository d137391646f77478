#include "certainsync/primes.hpp"

#include <mutex>

namespace certainsync {

namespace {

std::mutex g_mutex;
std::vector<std::uint64_t> g_primes{2, 3, 5, 7, 11, 13};

bool is_prime_by_division(std::uint64_t v) {
    if (v < 2) return false;
    if (v % 2 == 0) return v == 2;
    if (v % 3 == 0) return v == 3;
    for (std::uint64_t f = 5; f * f <= v; f += 6) {
        if (v % f == 0 || v % (f + 2) == 0) return false;
    }
    return true;
}

// Extends the cached prime list to at least k entries. Caller holds g_mutex.
void grow_to_count(std::uint64_t k) {
    std::uint64_t candidate = g_primes.back();
    while (g_primes.size() < k) {
        candidate += 2;
        if (is_prime_by_division(candidate)) g_primes.push_back(candidate);
    }
}

} // namespace

std::uint64_t nth_prime(std::uint64_t index) {
    std::lock_guard<std::mutex> lock(g_mutex);
    if (index == 0) return 2;
    grow_to_count(index);
    return g_primes[index - 1];
}

std::vector<std::uint64_t> first_primes(std::uint64_t k) {
    std::lock_guard<std::mutex> lock(g_mutex);
    grow_to_count(k);
    return std::vector<std::uint64_t>(g_primes.begin(), g_primes.begin() + static_cast<std::ptrdiff_t>(k));
}

bool is_prime(std::uint64_t v) {
    return is_prime_by_division(v);
}

std::uint64_t next_prime_at_least(std::uint64_t v) {
    if (v <= 2) return 2;
    std::uint64_t c = v;
    while (!is_prime_by_division(c)) ++c;
    return c;
}

std::uint64_t ceil_sqrt(std::uint64_t n) {
    if (n == 0) return 0;
    auto square_reaches = [n](std::uint64_t r) {
        return static_cast<unsigned __int128>(r) * r >= n;
    };
    std::uint64_t lo = 1, hi = 1ull << 32;
    while (lo < hi) {
        std::uint64_t mid = lo + (hi - lo) / 2;
        if (square_reaches(mid)) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    return lo;
}

} // namespace certainsync
