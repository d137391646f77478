#pragma once

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "certainsync/construction.hpp"
#include "certainsync/errors.hpp"
#include "certainsync/iblt.hpp"

namespace certainsync {

enum class MsgKind : std::uint8_t {
    Hello = 1,
    ChunkData = 2,
    Continue = 3,
    Stop = 4,
    DiffPayload = 5,
    Abort = 6,
    SizeHandshake = 7,
    ReducedHello = 8,
    OriginalsRequest = 9,
    OriginalsResponse = 10,
    DigestExchange = 11,
};

enum class AbortReason : std::uint8_t {
    SpecMismatch = 1,
    Exhausted = 2,
    ProtocolError = 3,
};

struct Frame {
    MsgKind kind{};
    std::uint64_t session = 0;
    std::vector<std::uint8_t> body;

    bool operator==(const Frame&) const = default;
};

inline constexpr std::size_t kMaxFrameBody = 1u << 26;

// 4-byte big-endian body length, then kind(1), session(8), payload.
std::vector<std::uint8_t> encode_frame(const Frame& frame);
Frame decode_frame(const std::uint8_t* data, std::size_t len);

struct HelloInfo {
    Family family{};
    std::uint64_t n = 0;
    std::uint64_t ols_order = 0;
    std::uint8_t element_width = 8; // bytes; 8 native, 32 raw identifiers

    bool operator==(const HelloInfo&) const = default;
};

struct ReducedHelloInfo {
    std::uint32_t round = 0;
    std::uint64_t reduced_n = 0;
    std::uint64_t delta_max = 0;
    Family family{};
    std::uint8_t element_width = 8;

    bool operator==(const ReducedHelloInfo&) const = default;
};

struct SyncDigest {
    std::uint64_t cardinality = 0;
    std::uint64_t xor_hash = 0;

    bool operator==(const SyncDigest&) const = default;
};

std::vector<std::uint8_t> encode_hello(const HelloInfo& info);
HelloInfo decode_hello(const std::vector<std::uint8_t>& body);

std::vector<std::uint8_t> encode_reduced_hello(const ReducedHelloInfo& info);
ReducedHelloInfo decode_reduced_hello(const std::vector<std::uint8_t>& body);

std::vector<std::uint8_t> encode_digest(const SyncDigest& digest);
SyncDigest decode_digest(const std::vector<std::uint8_t>& body);

std::vector<std::uint8_t> encode_size_handshake(std::uint64_t set_size);
std::uint64_t decode_size_handshake(const std::vector<std::uint8_t>& body);

std::vector<std::uint8_t> encode_abort(AbortReason reason);
AbortReason decode_abort(const std::vector<std::uint8_t>& body);

template <typename E>
std::vector<std::uint8_t> encode_chunk_data(std::uint32_t chunk_index,
                                            const std::vector<Cell<E>>& cells) {
    std::vector<std::uint8_t> body(4);
    body[0] = static_cast<std::uint8_t>(chunk_index >> 24);
    body[1] = static_cast<std::uint8_t>(chunk_index >> 16);
    body[2] = static_cast<std::uint8_t>(chunk_index >> 8);
    body[3] = static_cast<std::uint8_t>(chunk_index);
    serialize_cells(cells, body);
    return body;
}

template <typename E>
std::pair<std::uint32_t, std::vector<Cell<E>>> decode_chunk_data(
    const std::vector<std::uint8_t>& body) {
    if (body.size() < 4) throw MalformedFrame("chunk frame shorter than its header");
    std::uint32_t index = (std::uint32_t(body[0]) << 24) | (std::uint32_t(body[1]) << 16) |
                          (std::uint32_t(body[2]) << 8) | std::uint32_t(body[3]);
    return {index, deserialize_cells<E>(body.data() + 4, body.size() - 4)};
}

template <typename E>
std::vector<std::uint8_t> encode_element_list(const std::vector<E>& elements) {
    constexpr std::size_t w = ElementTraits<E>::byte_width;
    std::vector<std::uint8_t> body(4 + elements.size() * w);
    std::uint32_t count = static_cast<std::uint32_t>(elements.size());
    body[0] = static_cast<std::uint8_t>(count >> 24);
    body[1] = static_cast<std::uint8_t>(count >> 16);
    body[2] = static_cast<std::uint8_t>(count >> 8);
    body[3] = static_cast<std::uint8_t>(count);
    for (std::size_t i = 0; i < elements.size(); ++i) {
        ElementTraits<E>::write_be(elements[i], body.data() + 4 + i * w);
    }
    return body;
}

template <typename E>
std::vector<E> decode_element_list(const std::vector<std::uint8_t>& body) {
    constexpr std::size_t w = ElementTraits<E>::byte_width;
    if (body.size() < 4) throw MalformedFrame("element list shorter than its header");
    std::uint32_t count = (std::uint32_t(body[0]) << 24) | (std::uint32_t(body[1]) << 16) |
                          (std::uint32_t(body[2]) << 8) | std::uint32_t(body[3]);
    if (body.size() != 4 + static_cast<std::size_t>(count) * w) {
        throw MalformedFrame("element list length mismatch");
    }
    std::vector<E> elements(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        elements[i] = ElementTraits<E>::read_be(body.data() + 4 + i * w);
    }
    return elements;
}

// OriginalsResponse: per requested reduced value, every original that maps to it.
template <typename E>
std::vector<std::uint8_t> encode_originals_response(
    const std::vector<std::pair<std::uint64_t, std::vector<E>>>& groups) {
    constexpr std::size_t w = ElementTraits<E>::byte_width;
    std::vector<std::uint8_t> body;
    auto push_u32 = [&body](std::uint32_t v) {
        body.push_back(static_cast<std::uint8_t>(v >> 24));
        body.push_back(static_cast<std::uint8_t>(v >> 16));
        body.push_back(static_cast<std::uint8_t>(v >> 8));
        body.push_back(static_cast<std::uint8_t>(v));
    };
    push_u32(static_cast<std::uint32_t>(groups.size()));
    for (const auto& [value, originals] : groups) {
        std::uint8_t buf[8];
        ElementTraits<std::uint64_t>::write_be(value, buf);
        body.insert(body.end(), buf, buf + 8);
        push_u32(static_cast<std::uint32_t>(originals.size()));
        for (const E& e : originals) {
            std::uint8_t ebuf[w];
            ElementTraits<E>::write_be(e, ebuf);
            body.insert(body.end(), ebuf, ebuf + w);
        }
    }
    return body;
}

template <typename E>
std::vector<std::pair<std::uint64_t, std::vector<E>>> decode_originals_response(
    const std::vector<std::uint8_t>& body) {
    constexpr std::size_t w = ElementTraits<E>::byte_width;
    std::size_t pos = 0;
    auto read_u32 = [&](const char* what) -> std::uint32_t {
        if (pos + 4 > body.size()) throw MalformedFrame(what);
        std::uint32_t v = (std::uint32_t(body[pos]) << 24) | (std::uint32_t(body[pos + 1]) << 16) |
                          (std::uint32_t(body[pos + 2]) << 8) | std::uint32_t(body[pos + 3]);
        pos += 4;
        return v;
    };
    std::uint32_t group_count = read_u32("originals response truncated");
    std::vector<std::pair<std::uint64_t, std::vector<E>>> groups;
    groups.reserve(group_count);
    for (std::uint32_t g = 0; g < group_count; ++g) {
        if (pos + 8 > body.size()) throw MalformedFrame("originals response truncated");
        std::uint64_t value = ElementTraits<std::uint64_t>::read_be(body.data() + pos);
        pos += 8;
        std::uint32_t count = read_u32("originals response truncated");
        if (pos + static_cast<std::size_t>(count) * w > body.size()) {
            throw MalformedFrame("originals response truncated");
        }
        std::vector<E> originals(count);
        for (std::uint32_t i = 0; i < count; ++i) {
            originals[i] = ElementTraits<E>::read_be(body.data() + pos);
            pos += w;
        }
        groups.emplace_back(value, std::move(originals));
    }
    if (pos != body.size()) throw MalformedFrame("originals response has trailing bytes");
    return groups;
}

// Blocking byte-message transport; in-memory pairs and TCP streams implement it.
class Transport {
public:
    virtual ~Transport() = default;
    virtual void send_frame(const Frame& frame) = 0;
    virtual Frame recv_frame() = 0;
    virtual std::uint64_t bytes_sent() const = 0;
    virtual std::uint64_t bytes_received() const = 0;
};

std::pair<std::unique_ptr<Transport>, std::unique_ptr<Transport>> make_in_memory_pair();

} // namespace certainsync
