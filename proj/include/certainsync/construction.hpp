#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "certainsync/errors.hpp"

namespace certainsync {

enum class Family : std::uint8_t {
    EGH = 1,
    OLS = 2,
    ExtendedHamming = 3,
};

const char* family_name(Family f);

// Universe plus construction parameters. Elements are integers in [1, n].
struct ConstructionSpec {
    Family family = Family::EGH;
    std::uint64_t n = 0;
    std::uint64_t ols_order = 0; // Latin-square order s; OLS only

    static ConstructionSpec egh(std::uint64_t n);
    // s == 0 selects default_ols_order(n); s must be prime with s*s >= n.
    static ConstructionSpec ols(std::uint64_t n, std::uint64_t s = 0);
    static ConstructionSpec extended_hamming(std::uint64_t n); // n >= 8
};

// Smallest prime >= ceil(sqrt(n)).
std::uint64_t default_ols_order(std::uint64_t n);

struct ChunkSchedule {
    std::vector<std::uint64_t> sizes; // rows per chunk, in transmission order
};

struct DecodabilityProfile {
    // cumulative_rows[i-1] = total rows that guarantee listing of any diff of size <= i
    std::vector<std::uint64_t> cumulative_rows;
};

// Sizes of the first max_chunks chunks. Throws ChunkLimitExceeded past the
// construction's last chunk (OLS: s chunks, ExtendedHamming: 3 chunks).
ChunkSchedule chunk_schedule(const ConstructionSpec& spec, std::uint64_t max_chunks);

// Guaranteed-listing row counts for diff sizes 1..up_to_d.
// Throws DiffSizeUnsupported when up_to_d exceeds max_diff_size(spec).
DecodabilityProfile decodability_profile(const ConstructionSpec& spec, std::uint64_t up_to_d);

// Largest diff size the construction can guarantee: EGH n, OLS s, ExtendedHamming 3.
std::uint64_t max_diff_size(const ConstructionSpec& spec);

// Number of chunks the construction can emit; 0 means practically unbounded (EGH).
std::uint64_t chunk_count_limit(const ConstructionSpec& spec);

// 0-based row offsets of `element` inside 1-based chunk `chunk`. A column may
// have no row in a chunk (ExtendedHamming chunk 2, element 1). Throws
// ElementOutOfUniverse for element outside [1, n].
void rows_for_element(const ConstructionSpec& spec, std::uint64_t chunk, std::uint64_t element,
                      std::vector<std::uint32_t>& out);
std::vector<std::uint32_t> rows_for_element(const ConstructionSpec& spec, std::uint64_t chunk,
                                            std::uint64_t element);

struct BinaryMatrix {
    std::uint64_t rows = 0;
    std::uint64_t cols = 0;
    std::vector<std::uint8_t> bits; // row-major

    bool at(std::uint64_t r, std::uint64_t c) const { return bits[r * cols + c] != 0; }
};

// Stacks the first `chunks` chunks as explicit rows over columns 1..n.
// Throws TooLargeToMaterialize when total rows exceed 10^4.
BinaryMatrix materialize(const ConstructionSpec& spec, std::uint64_t chunks);

// Size of the smallest stopping set (column subset with no row of weight one);
// cols+1 when none exists. Exhaustive; throws TooLargeForOracle for cols > 24.
std::uint64_t stopping_distance(const BinaryMatrix& m);

// Smallest k with p_1 * ... * p_k >= n^i, decided with exact arithmetic.
std::uint64_t smallest_prime_count(std::uint64_t n, std::uint64_t i);

// Incremental exact tracker of the EGH decodability level reached so far.
class EghLevelTracker {
public:
    explicit EghLevelTracker(std::uint64_t n);
    ~EghLevelTracker();
    EghLevelTracker(EghLevelTracker&&) noexcept;
    EghLevelTracker& operator=(EghLevelTracker&&) noexcept;

    void on_chunk(std::uint64_t prime);
    std::uint64_t level() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace certainsync
