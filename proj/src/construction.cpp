#include "certainsync/construction.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include "certainsync/primes.hpp"

namespace certainsync {

namespace mp = boost::multiprecision;

namespace {

std::uint64_t log2_ceil(std::uint64_t n) {
    std::uint64_t bits = 0;
    while ((1ull << bits) < n) ++bits;
    return bits;
}

void validate(const ConstructionSpec& spec) {
    if (spec.n == 0) throw ConfigError("universe size must be at least 1");
    switch (spec.family) {
        case Family::EGH:
            break;
        case Family::OLS:
            if (!is_prime(spec.ols_order)) throw ConfigError("OLS order must be prime");
            if (static_cast<unsigned __int128>(spec.ols_order) * spec.ols_order < spec.n) {
                throw ConfigError("OLS order too small for universe");
            }
            break;
        case Family::ExtendedHamming:
            if (spec.n < 8) throw ConfigError("ExtendedHamming requires n >= 8");
            break;
    }
}

std::uint64_t eh_bit_count(const ConstructionSpec& spec) {
    return log2_ceil(spec.n);
}

} // namespace

const char* family_name(Family f) {
    switch (f) {
        case Family::EGH: return "EGH";
        case Family::OLS: return "OLS";
        case Family::ExtendedHamming: return "EH";
    }
    return "?";
}

ConstructionSpec ConstructionSpec::egh(std::uint64_t n) {
    ConstructionSpec spec{Family::EGH, n, 0};
    validate(spec);
    return spec;
}

ConstructionSpec ConstructionSpec::ols(std::uint64_t n, std::uint64_t s) {
    ConstructionSpec spec{Family::OLS, n, s == 0 ? default_ols_order(n) : s};
    validate(spec);
    return spec;
}

ConstructionSpec ConstructionSpec::extended_hamming(std::uint64_t n) {
    ConstructionSpec spec{Family::ExtendedHamming, n, 0};
    validate(spec);
    return spec;
}

std::uint64_t default_ols_order(std::uint64_t n) {
    return next_prime_at_least(ceil_sqrt(n));
}

std::uint64_t max_diff_size(const ConstructionSpec& spec) {
    switch (spec.family) {
        case Family::EGH: return spec.n;
        case Family::OLS: return spec.ols_order;
        case Family::ExtendedHamming: return 3;
    }
    throw ConfigError("unknown family");
}

std::uint64_t chunk_count_limit(const ConstructionSpec& spec) {
    switch (spec.family) {
        case Family::EGH: return 0;
        case Family::OLS: return spec.ols_order;
        case Family::ExtendedHamming: return 3;
    }
    throw ConfigError("unknown family");
}

ChunkSchedule chunk_schedule(const ConstructionSpec& spec, std::uint64_t max_chunks) {
    validate(spec);
    std::uint64_t limit = chunk_count_limit(spec);
    if (limit != 0 && max_chunks > limit) {
        throw ChunkLimitExceeded(std::string(family_name(spec.family)) + " has no chunk beyond " +
                                 std::to_string(limit));
    }
    ChunkSchedule schedule;
    schedule.sizes.reserve(max_chunks);
    switch (spec.family) {
        case Family::EGH:
            for (std::uint64_t j = 1; j <= max_chunks; ++j) schedule.sizes.push_back(nth_prime(j));
            break;
        case Family::OLS:
            schedule.sizes.assign(max_chunks, spec.ols_order);
            break;
        case Family::ExtendedHamming: {
            std::uint64_t m = eh_bit_count(spec);
            for (std::uint64_t j = 1; j <= max_chunks; ++j) schedule.sizes.push_back(j == 1 ? 1 : m);
            break;
        }
    }
    return schedule;
}

std::uint64_t smallest_prime_count(std::uint64_t n, std::uint64_t i) {
    mp::cpp_int target = mp::pow(mp::cpp_int(n), static_cast<unsigned>(i));
    mp::cpp_int product = 1;
    std::uint64_t k = 0;
    while (product < target) {
        ++k;
        product *= nth_prime(k);
    }
    return k;
}

DecodabilityProfile decodability_profile(const ConstructionSpec& spec, std::uint64_t up_to_d) {
    validate(spec);
    if (up_to_d == 0 || up_to_d > max_diff_size(spec)) {
        throw DiffSizeUnsupported("diff size " + std::to_string(up_to_d) + " outside [1, " +
                                  std::to_string(max_diff_size(spec)) + "] for " +
                                  family_name(spec.family));
    }
    DecodabilityProfile profile;
    profile.cumulative_rows.reserve(up_to_d);
    switch (spec.family) {
        case Family::EGH: {
            mp::cpp_int n(spec.n);
            mp::cpp_int target = n * n; // one-row-per-chunk peeling needs the d=2 bound even for d=1
            mp::cpp_int product = 1;
            std::uint64_t k = 0;
            std::uint64_t rows = 0;
            for (std::uint64_t d = 1; d <= up_to_d; ++d) {
                if (d > 2) target *= n;
                while (product < target) {
                    ++k;
                    std::uint64_t p = nth_prime(k);
                    product *= p;
                    rows += p;
                }
                profile.cumulative_rows.push_back(rows);
            }
            break;
        }
        case Family::OLS:
            for (std::uint64_t d = 1; d <= up_to_d; ++d) {
                profile.cumulative_rows.push_back(d * spec.ols_order);
            }
            break;
        case Family::ExtendedHamming: {
            std::uint64_t m = eh_bit_count(spec);
            static constexpr std::uint64_t kMultiplier[3] = {0, 1, 2};
            for (std::uint64_t d = 1; d <= up_to_d; ++d) {
                profile.cumulative_rows.push_back(1 + kMultiplier[d - 1] * m);
            }
            break;
        }
    }
    return profile;
}

void rows_for_element(const ConstructionSpec& spec, std::uint64_t chunk, std::uint64_t element,
                      std::vector<std::uint32_t>& out) {
    out.clear();
    if (element < 1 || element > spec.n) {
        throw ElementOutOfUniverse("element " + std::to_string(element) + " outside [1, " +
                                   std::to_string(spec.n) + "]");
    }
    std::uint64_t limit = chunk_count_limit(spec);
    if (chunk == 0 || (limit != 0 && chunk > limit)) {
        throw ChunkLimitExceeded("chunk " + std::to_string(chunk) + " outside schedule");
    }
    switch (spec.family) {
        case Family::EGH:
            out.push_back(static_cast<std::uint32_t>(element % nth_prime(chunk)));
            break;
        case Family::OLS: {
            std::uint64_t s = spec.ols_order;
            std::uint64_t k = element - 1;
            std::uint64_t x = k / s;
            std::uint64_t y = k % s;
            std::uint64_t a = chunk - 1; // square index; 0 is the row-block square
            out.push_back(static_cast<std::uint32_t>(a == 0 ? x : (a * x + y) % s));
            break;
        }
        case Family::ExtendedHamming: {
            std::uint64_t m = eh_bit_count(spec);
            std::uint64_t y = element - 1;
            if (chunk == 1) {
                out.push_back(0);
            } else {
                bool complement = chunk == 3;
                for (std::uint64_t b = 0; b < m; ++b) {
                    bool bit = (y >> (m - 1 - b)) & 1; // row 0 is the most significant bit
                    if (bit != complement) out.push_back(static_cast<std::uint32_t>(b));
                }
            }
            break;
        }
    }
}

std::vector<std::uint32_t> rows_for_element(const ConstructionSpec& spec, std::uint64_t chunk,
                                            std::uint64_t element) {
    std::vector<std::uint32_t> out;
    rows_for_element(spec, chunk, element, out);
    return out;
}

BinaryMatrix materialize(const ConstructionSpec& spec, std::uint64_t chunks) {
    constexpr std::uint64_t kRowCap = 10000;
    ChunkSchedule schedule = chunk_schedule(spec, chunks);
    std::uint64_t total_rows = 0;
    for (std::uint64_t size : schedule.sizes) {
        total_rows += size;
        if (total_rows > kRowCap) {
            throw TooLargeToMaterialize("materialized matrix would exceed " +
                                        std::to_string(kRowCap) + " rows");
        }
    }
    if (total_rows * spec.n > 100000000ull) {
        throw TooLargeToMaterialize("materialized matrix would exceed 10^8 entries");
    }
    BinaryMatrix m;
    m.rows = total_rows;
    m.cols = spec.n;
    m.bits.assign(total_rows * spec.n, 0);
    std::vector<std::uint32_t> offsets;
    std::uint64_t base = 0;
    for (std::uint64_t c = 1; c <= chunks; ++c) {
        for (std::uint64_t e = 1; e <= spec.n; ++e) {
            rows_for_element(spec, c, e, offsets);
            for (std::uint32_t off : offsets) {
                m.bits[(base + off) * m.cols + (e - 1)] = 1;
            }
        }
        base += schedule.sizes[c - 1];
    }
    return m;
}

std::uint64_t stopping_distance(const BinaryMatrix& m) {
    if (m.cols > 24) throw TooLargeForOracle("stopping-distance search limited to 24 columns");
    std::vector<std::uint32_t> row_masks(m.rows, 0);
    for (std::uint64_t r = 0; r < m.rows; ++r) {
        std::uint32_t mask = 0;
        for (std::uint64_t c = 0; c < m.cols; ++c) {
            if (m.at(r, c)) mask |= 1u << c;
        }
        row_masks[r] = mask;
    }
    const std::uint32_t full = m.cols == 32 ? ~0u : ((1u << m.cols) - 1);
    for (std::uint64_t size = 1; size <= m.cols; ++size) {
        // Gosper's hack walks all column subsets of this popcount.
        std::uint32_t subset = (1u << size) - 1;
        while (subset <= full) {
            bool stopping = true;
            for (std::uint32_t mask : row_masks) {
                std::uint32_t hit = mask & subset;
                if (hit != 0 && (hit & (hit - 1)) == 0) {
                    stopping = false;
                    break;
                }
            }
            if (stopping) return size;
            std::uint32_t low = subset & (~subset + 1);
            std::uint32_t ripple = subset + low;
            std::uint32_t ones = subset ^ ripple;
            ones = (ones >> 2) / low;
            subset = ripple | ones;
            if (ripple == 0) break;
        }
    }
    return m.cols + 1;
}

struct EghLevelTracker::Impl {
    mp::cpp_int n;
    mp::cpp_int product = 1;
    mp::cpp_int next_target;
    std::uint64_t level = 0;
    std::uint64_t level_cap = 0; // past the cap no diff can need more chunks
};

EghLevelTracker::EghLevelTracker(std::uint64_t n) : impl_(std::make_unique<Impl>()) {
    impl_->n = n;
    impl_->next_target = impl_->n;
    impl_->level_cap = n;
}

EghLevelTracker::~EghLevelTracker() = default;
EghLevelTracker::EghLevelTracker(EghLevelTracker&&) noexcept = default;
EghLevelTracker& EghLevelTracker::operator=(EghLevelTracker&&) noexcept = default;

void EghLevelTracker::on_chunk(std::uint64_t prime) {
    if (impl_->level > impl_->level_cap) return;
    impl_->product *= prime;
    while (impl_->product >= impl_->next_target) {
        ++impl_->level;
        if (impl_->level > impl_->level_cap) return;
        impl_->next_target *= impl_->n;
    }
}

std::uint64_t EghLevelTracker::level() const {
    return impl_->level;
}

} // namespace certainsync
