#pragma once

#include <cstdint>
#include <cstring>
#include <set>
#include <vector>

#include "certainsync/construction.hpp"
#include "certainsync/errors.hpp"
#include "certainsync/hashing.hpp"
#include "certainsync/primes.hpp"
#include "certainsync/u256.hpp"

namespace certainsync {

template <typename E>
struct ElementTraits;

template <>
struct ElementTraits<std::uint64_t> {
    static constexpr std::size_t byte_width = 8;
    static void write_be(std::uint64_t v, std::uint8_t* out) {
        for (int i = 0; i < 8; ++i) out[i] = static_cast<std::uint8_t>(v >> (56 - 8 * i));
    }
    static std::uint64_t read_be(const std::uint8_t* in) {
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v = (v << 8) | in[i];
        return v;
    }
    static bool is_zero(std::uint64_t v) { return v == 0; }
};

template <>
struct ElementTraits<u256> {
    static constexpr std::size_t byte_width = 32;
    static void write_be(const u256& v, std::uint8_t* out) { v.write_be(out); }
    static u256 read_be(const std::uint8_t* in) { return u256::read_be(in); }
    static bool is_zero(const u256& v) { return v.is_zero(); }
};

template <typename E>
std::uint64_t checksum_of(const E& e) {
    std::uint8_t bytes[ElementTraits<E>::byte_width];
    ElementTraits<E>::write_be(e, bytes);
    return checksum_hash_bytes(bytes, sizeof(bytes));
}

template <typename E>
struct Cell {
    std::int64_t count = 0;
    E xor_sum{};
    std::uint64_t check_sum = 0;

    bool is_neutral() const {
        return count == 0 && ElementTraits<E>::is_zero(xor_sum) && check_sum == 0;
    }
    bool operator==(const Cell&) const = default;
};

// Bytes per encoded cell: 24 in native 64-bit mode, 72 in raw-identifier mode.
template <typename E>
constexpr std::size_t cell_wire_bytes() {
    return 8 + 2 * ElementTraits<E>::byte_width;
}

// Maps integer elements of [1, n] through the configured construction.
struct SpecMapper {
    ConstructionSpec spec;

    using Element = std::uint64_t;
    std::uint64_t chunk_size(std::uint64_t chunk) const {
        switch (spec.family) {
            case Family::EGH: return nth_prime(chunk);
            case Family::OLS: return spec.ols_order;
            case Family::ExtendedHamming: {
                if (chunk == 1) return 1;
                std::uint64_t m = 0;
                while ((1ull << m) < spec.n) ++m;
                return m;
            }
        }
        throw ConfigError("unknown family");
    }
    std::uint64_t chunk_limit() const { return chunk_count_limit(spec); }
    // Universe size bounding the decodability level, nonzero only when the
    // sender must detect that more chunks cannot help (unbounded schedules).
    std::uint64_t egh_universe() const { return spec.family == Family::EGH ? spec.n : 0; }
    bool contains(std::uint64_t e) const { return e >= 1 && e <= spec.n; }
    void rows(std::uint64_t chunk, std::uint64_t e, std::vector<std::uint32_t>& out) const {
        rows_for_element(spec, chunk, e, out);
    }
};

// EGH over the full 256-bit identifier universe; chunk j spans the j-th prime.
struct RawEghMapper {
    using Element = u256;
    std::uint64_t chunk_size(std::uint64_t chunk) const { return nth_prime(chunk); }
    std::uint64_t chunk_limit() const { return 0; }
    // The 2^256 universe never exhausts in practice; skip level tracking.
    std::uint64_t egh_universe() const { return 0; }
    bool contains(const u256& e) const { return !e.is_zero(); }
    void rows(std::uint64_t chunk, const u256& e, std::vector<std::uint32_t>& out) const {
        out.clear();
        out.push_back(static_cast<std::uint32_t>(e.mod_small(nth_prime(chunk))));
    }
};

// Set elements paired with their cached checksums, the unit the encoder consumes.
template <typename E>
struct HashedSet {
    std::vector<std::pair<E, std::uint64_t>> items;

    static HashedSet from_elements(const std::vector<E>& elements) {
        HashedSet hs;
        hs.items.reserve(elements.size());
        for (const E& e : elements) hs.items.emplace_back(e, checksum_of(e));
        return hs;
    }
    void add(const E& e) { items.emplace_back(e, checksum_of(e)); }
};

template <typename E>
struct Sketch {
    std::vector<Cell<E>> cells;
    std::vector<std::uint64_t> chunk_sizes;

    std::uint64_t chunks() const { return chunk_sizes.size(); }

    void append_chunk(const std::vector<Cell<E>>& chunk_cells) {
        cells.insert(cells.end(), chunk_cells.begin(), chunk_cells.end());
        chunk_sizes.push_back(chunk_cells.size());
    }
};

template <typename Mapper, typename E = typename Mapper::Element>
std::vector<Cell<E>> encode_chunk(const Mapper& mapper, const HashedSet<E>& set,
                                  std::uint64_t chunk) {
    std::vector<Cell<E>> cells(mapper.chunk_size(chunk));
    std::vector<std::uint32_t> offsets;
    for (const auto& [e, check] : set.items) {
        if (!mapper.contains(e)) throw ElementOutOfUniverse("element outside the agreed universe");
        mapper.rows(chunk, e, offsets);
        for (std::uint32_t off : offsets) {
            Cell<E>& cell = cells[off];
            cell.count += 1;
            cell.xor_sum ^= e;
            cell.check_sum ^= check;
        }
    }
    return cells;
}

// Cell-wise local minus remote; shapes must match.
template <typename E>
Sketch<E> subtract(const Sketch<E>& local, const Sketch<E>& remote) {
    if (local.chunk_sizes != remote.chunk_sizes) {
        throw SketchShapeMismatch("sketches cover different chunk layouts");
    }
    Sketch<E> diff = local;
    for (std::size_t i = 0; i < diff.cells.size(); ++i) {
        diff.cells[i].count -= remote.cells[i].count;
        diff.cells[i].xor_sum ^= remote.cells[i].xor_sum;
        diff.cells[i].check_sum ^= remote.cells[i].check_sum;
    }
    return diff;
}

template <typename E>
struct PeelResult {
    bool success = false;
    std::vector<E> receiver_only; // peeled with count +1
    std::vector<E> sender_only;   // peeled with count -1
};

namespace detail {

template <typename E>
bool cell_is_pure(const Cell<E>& cell) {
    if (cell.count != 1 && cell.count != -1) return false;
    return cell.check_sum == checksum_of(cell.xor_sum);
}

} // namespace detail

// Lists the signed difference captured by `diff`. Success requires the sketch
// to drain to all-neutral cells and the recovered difference to re-encode to
// exactly the input cells, which turns checksum-collision misdecodes into Fail.
template <typename Mapper, typename E = typename Mapper::Element>
PeelResult<E> peel(const Mapper& mapper, const Sketch<E>& diff) {
    std::vector<Cell<E>> cells = diff.cells;
    const std::uint64_t chunk_count = diff.chunks();
    std::vector<std::size_t> chunk_base(chunk_count + 1, 0);
    for (std::uint64_t c = 0; c < chunk_count; ++c) {
        chunk_base[c + 1] = chunk_base[c] + diff.chunk_sizes[c];
    }

    std::vector<std::size_t> worklist;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (detail::cell_is_pure(cells[i])) worklist.push_back(i);
    }

    PeelResult<E> result;
    std::set<E> recovered;
    std::vector<std::uint32_t> offsets;
    while (!worklist.empty()) {
        std::size_t idx = worklist.back();
        worklist.pop_back();
        if (!detail::cell_is_pure(cells[idx])) continue;

        const E element = cells[idx].xor_sum;
        if (!mapper.contains(element) || recovered.count(element)) continue;

        std::uint64_t cell_chunk = 0;
        while (chunk_base[cell_chunk + 1] <= idx) ++cell_chunk;
        mapper.rows(cell_chunk + 1, element, offsets);
        bool row_matches = false;
        for (std::uint32_t off : offsets) {
            if (chunk_base[cell_chunk] + off == idx) row_matches = true;
        }
        if (!row_matches) continue;

        const std::int64_t sign = cells[idx].count;
        const std::uint64_t check = checksum_of(element);
        recovered.insert(element);
        (sign > 0 ? result.receiver_only : result.sender_only).push_back(element);

        for (std::uint64_t c = 1; c <= chunk_count; ++c) {
            mapper.rows(c, element, offsets);
            for (std::uint32_t off : offsets) {
                Cell<E>& cell = cells[chunk_base[c - 1] + off];
                cell.count -= sign;
                cell.xor_sum ^= element;
                cell.check_sum ^= check;
                if (detail::cell_is_pure(cell)) worklist.push_back(chunk_base[c - 1] + off);
            }
        }
    }

    for (const Cell<E>& cell : cells) {
        if (!cell.is_neutral()) return {};
    }

    Sketch<E> reencoded;
    reencoded.chunk_sizes = diff.chunk_sizes;
    reencoded.cells.assign(diff.cells.size(), Cell<E>{});
    auto apply = [&](const E& e, std::int64_t sign) {
        const std::uint64_t check = checksum_of(e);
        for (std::uint64_t c = 1; c <= chunk_count; ++c) {
            mapper.rows(c, e, offsets);
            for (std::uint32_t off : offsets) {
                Cell<E>& cell = reencoded.cells[chunk_base[c - 1] + off];
                cell.count += sign;
                cell.xor_sum ^= e;
                cell.check_sum ^= check;
            }
        }
    };
    for (const E& e : result.receiver_only) apply(e, 1);
    for (const E& e : result.sender_only) apply(e, -1);
    if (reencoded.cells != diff.cells) return {};

    result.success = true;
    return result;
}

template <typename E>
void serialize_cells(const std::vector<Cell<E>>& cells, std::vector<std::uint8_t>& out) {
    constexpr std::size_t w = ElementTraits<E>::byte_width;
    const std::size_t base = out.size();
    out.resize(base + cells.size() * cell_wire_bytes<E>());
    std::uint8_t* p = out.data() + base;
    for (const Cell<E>& cell : cells) {
        ElementTraits<std::uint64_t>::write_be(static_cast<std::uint64_t>(cell.count), p);
        ElementTraits<E>::write_be(cell.xor_sum, p + 8);
        ElementTraits<std::uint64_t>::write_be(cell.check_sum, p + 8 + w);
        p += cell_wire_bytes<E>();
    }
}

template <typename E>
std::vector<Cell<E>> deserialize_cells(const std::uint8_t* data, std::size_t len) {
    constexpr std::size_t w = ElementTraits<E>::byte_width;
    constexpr std::size_t stride = cell_wire_bytes<E>();
    if (len % stride != 0) throw MalformedFrame("cell payload length not a multiple of cell size");
    std::vector<Cell<E>> cells(len / stride);
    const std::uint8_t* p = data;
    for (Cell<E>& cell : cells) {
        cell.count = static_cast<std::int64_t>(ElementTraits<std::uint64_t>::read_be(p));
        cell.xor_sum = ElementTraits<E>::read_be(p + 8);
        cell.check_sum = ElementTraits<std::uint64_t>::read_be(p + 8 + w);
        p += stride;
    }
    return cells;
}

} // namespace certainsync
