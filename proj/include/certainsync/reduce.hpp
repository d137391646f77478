#pragma once

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "certainsync/construction.hpp"
#include "certainsync/errors.hpp"
#include "certainsync/hashing.hpp"
#include "certainsync/sync.hpp"
#include "certainsync/wire.hpp"

namespace certainsync {

inline constexpr std::uint32_t kDefaultRoundCap = 16;

// Smallest universe keeping the expected colliding pairs within budget, and
// never below the next power of two of the combined set size.
std::uint64_t reduced_universe_size(std::uint64_t m, std::uint64_t delta_max_collisions);

// i-th output (i >= 1) of a splitmix64 stream seeded identically on both sides.
std::uint64_t salt_for_round(std::uint64_t seed, std::uint32_t round);

// Expected colliding pairs when m elements hash uniformly into [1, n_r].
double expected_collisions(std::uint64_t m, std::uint64_t n_r);

// One round's salted projection of a set, with the reverse map back to originals.
template <typename E>
struct ReducedMapping {
    std::vector<std::uint64_t> reduced_set; // sorted, duplicates merged
    std::unordered_map<std::uint64_t, std::vector<E>> originals_of;
};

template <typename E>
std::uint64_t reduce_element(const E& e, std::uint64_t salt, std::uint64_t n_r) {
    std::uint8_t buf[ElementTraits<E>::byte_width];
    ElementTraits<E>::write_be(e, buf);
    return salted_hash_bytes(buf, sizeof(buf), salt) % n_r + 1;
}

template <typename E>
ReducedMapping<E> certain_mapping(const std::vector<E>& set, std::uint64_t salt,
                                  std::uint64_t n_r) {
    ReducedMapping<E> mapping;
    mapping.originals_of.reserve(set.size());
    for (const E& e : set) mapping.originals_of[reduce_element(e, salt, n_r)].push_back(e);
    mapping.reduced_set.reserve(mapping.originals_of.size());
    for (const auto& [value, originals] : mapping.originals_of) {
        mapping.reduced_set.push_back(value);
    }
    std::sort(mapping.reduced_set.begin(), mapping.reduced_set.end());
    return mapping;
}

// Constant-size set fingerprint both parties compare to decide another round.
template <typename E>
SyncDigest digest(const std::vector<E>& set) {
    SyncDigest d;
    d.cardinality = set.size();
    for (const E& e : set) d.xor_hash ^= checksum_of(e);
    return d;
}

template <typename E>
struct ReduceOutcomeT {
    std::vector<E> receiver_only;
    std::vector<E> sender_only;
    std::uint32_t rounds = 0;
    std::uint64_t chunks_used = 0; // summed over rounds
    std::uint64_t cells_used = 0;
    std::uint64_t bits_on_wire = 0; // cells x native cell width
    std::uint64_t wire_bytes = 0;
};

using ReduceOutcome = ReduceOutcomeT<std::uint64_t>;
using RawReduceOutcome = ReduceOutcomeT<u256>;

namespace detail {

inline ConstructionSpec reduced_spec(Family family, std::uint64_t n_r) {
    switch (family) {
        case Family::EGH: return ConstructionSpec::egh(n_r);
        case Family::OLS: return ConstructionSpec::ols(n_r);
        default: break;
    }
    throw ConfigError("universe reduction supports only the EGH and OLS families");
}

// Collects the originals behind each requested reduced value from one side's map.
template <typename E>
std::vector<std::pair<std::uint64_t, std::vector<E>>> group_originals(
    const std::unordered_map<std::uint64_t, std::vector<E>>& originals_of,
    const std::vector<std::uint64_t>& values) {
    std::vector<std::pair<std::uint64_t, std::vector<E>>> groups;
    groups.reserve(values.size());
    for (std::uint64_t v : values) {
        auto it = originals_of.find(v);
        if (it == originals_of.end()) {
            throw Error("peer requested a reduced value this side never produced");
        }
        groups.emplace_back(v, it->second);
    }
    return groups;
}

} // namespace detail

// Sender side (P1): streams reduced-universe cells each round, serves the
// originals behind decoded sender-side values, absorbs the receiver-side diff.
template <typename E>
ReduceOutcomeT<E> run_reduce_sender(Transport& transport, std::uint64_t session,
                                    std::vector<E>& set, std::uint64_t delta_max_collisions,
                                    Family family, std::uint64_t seed,
                                    std::uint32_t round_cap = kDefaultRoundCap) {
    if (family != Family::EGH && family != Family::OLS) {
        throw ConfigError("universe reduction supports only the EGH and OLS families");
    }
    ReduceOutcomeT<E> outcome;
    for (std::uint32_t round = 1;; ++round) {
        if (round > round_cap) {
            throw RoundLimitExceeded("digests still differ after " + std::to_string(round_cap) +
                                     " rounds");
        }
        outcome.rounds = round;

        transport.send_frame(Frame{MsgKind::SizeHandshake, session, encode_size_handshake(set.size())});
        Frame size_frame = transport.recv_frame();
        detail::check_session(size_frame, session);
        if (size_frame.kind != MsgKind::SizeHandshake) throw MalformedFrame("expected a size handshake");
        std::uint64_t peer_size = decode_size_handshake(size_frame.body);

        std::uint64_t m = set.size() + peer_size;
        std::uint64_t n_r = reduced_universe_size(std::max<std::uint64_t>(m, 1), delta_max_collisions);
        std::uint64_t salt = salt_for_round(seed, round);

        ReducedHelloInfo local_hello{round, n_r, delta_max_collisions, family,
                                     static_cast<std::uint8_t>(ElementTraits<E>::byte_width)};
        transport.send_frame(Frame{MsgKind::ReducedHello, session, encode_reduced_hello(local_hello)});
        Frame hello_frame = transport.recv_frame();
        detail::check_session(hello_frame, session);
        if (hello_frame.kind == MsgKind::Abort) throw SpecMismatch("peer rejected round parameters");
        if (hello_frame.kind != MsgKind::ReducedHello) throw MalformedFrame("expected a round hello");
        if (decode_reduced_hello(hello_frame.body) != local_hello) {
            transport.send_frame(Frame{MsgKind::Abort, session, encode_abort(AbortReason::SpecMismatch)});
            throw SpecMismatch("peer derived different round parameters");
        }

        ReducedMapping<E> mapping = certain_mapping(set, salt, n_r);
        SpecMapper mapper{detail::reduced_spec(family, n_r)};
        ReconOutcome inner = run_sync_sender(transport, session, mapper, mapping.reduced_set,
                                             /*with_hello=*/false, /*expect_diff_payload=*/false);
        outcome.chunks_used += inner.chunks_used;
        outcome.cells_used += inner.cells_used;
        outcome.bits_on_wire += inner.bits_on_wire;

        if (inner.status == ReconOutcome::Status::Done) {
            Frame request = transport.recv_frame();
            detail::check_session(request, session);
            if (request.kind != MsgKind::OriginalsRequest) {
                throw MalformedFrame("expected a request for originals");
            }
            auto requested = decode_element_list<std::uint64_t>(request.body);
            auto groups = detail::group_originals(mapping.originals_of, requested);
            transport.send_frame(
                Frame{MsgKind::OriginalsResponse, session, encode_originals_response(groups)});
            for (auto& [value, originals] : groups) {
                outcome.sender_only.insert(outcome.sender_only.end(), originals.begin(),
                                           originals.end());
            }

            Frame payload = transport.recv_frame();
            detail::check_session(payload, session);
            if (payload.kind != MsgKind::DiffPayload) throw MalformedFrame("expected a diff payload");
            std::vector<E> theirs = decode_element_list<E>(payload.body);
            outcome.receiver_only.insert(outcome.receiver_only.end(), theirs.begin(), theirs.end());
            set.insert(set.end(), theirs.begin(), theirs.end());
        }

        transport.send_frame(Frame{MsgKind::DigestExchange, session, encode_digest(digest(set))});
        Frame digest_frame = transport.recv_frame();
        detail::check_session(digest_frame, session);
        if (digest_frame.kind != MsgKind::DigestExchange) throw MalformedFrame("expected a digest");
        if (decode_digest(digest_frame.body) == digest(set)) break;
    }
    outcome.wire_bytes = transport.bytes_sent() + transport.bytes_received();
    return outcome;
}

// Receiver side (P2): decodes each round, resolves both sides back to original
// elements, and drives the retry decision through the digest exchange.
template <typename E>
ReduceOutcomeT<E> run_reduce_receiver(Transport& transport, std::uint64_t session,
                                      std::vector<E>& set, std::uint64_t delta_max_collisions,
                                      Family family, std::uint64_t seed,
                                      std::uint32_t round_cap = kDefaultRoundCap) {
    if (family != Family::EGH && family != Family::OLS) {
        throw ConfigError("universe reduction supports only the EGH and OLS families");
    }
    ReduceOutcomeT<E> outcome;
    for (std::uint32_t round = 1;; ++round) {
        if (round > round_cap) {
            throw RoundLimitExceeded("digests still differ after " + std::to_string(round_cap) +
                                     " rounds");
        }
        outcome.rounds = round;

        Frame size_frame = transport.recv_frame();
        detail::check_session(size_frame, session);
        if (size_frame.kind != MsgKind::SizeHandshake) throw MalformedFrame("expected a size handshake");
        std::uint64_t peer_size = decode_size_handshake(size_frame.body);
        transport.send_frame(Frame{MsgKind::SizeHandshake, session, encode_size_handshake(set.size())});

        std::uint64_t m = set.size() + peer_size;
        std::uint64_t n_r = reduced_universe_size(std::max<std::uint64_t>(m, 1), delta_max_collisions);
        std::uint64_t salt = salt_for_round(seed, round);

        ReducedHelloInfo expected{round, n_r, delta_max_collisions, family,
                                  static_cast<std::uint8_t>(ElementTraits<E>::byte_width)};
        Frame hello_frame = transport.recv_frame();
        detail::check_session(hello_frame, session);
        if (hello_frame.kind != MsgKind::ReducedHello) throw MalformedFrame("expected a round hello");
        if (decode_reduced_hello(hello_frame.body) != expected) {
            transport.send_frame(Frame{MsgKind::Abort, session, encode_abort(AbortReason::SpecMismatch)});
            throw SpecMismatch("peer derived different round parameters");
        }
        transport.send_frame(Frame{MsgKind::ReducedHello, session, encode_reduced_hello(expected)});

        ReducedMapping<E> mapping = certain_mapping(set, salt, n_r);
        SpecMapper mapper{detail::reduced_spec(family, n_r)};
        ReconOutcome inner = run_sync_receiver(transport, session, mapper, mapping.reduced_set,
                                               /*with_hello=*/false, /*send_diff_payload=*/false);
        outcome.chunks_used += inner.chunks_used;
        outcome.cells_used += inner.cells_used;
        outcome.bits_on_wire += inner.bits_on_wire;

        if (inner.status == ReconOutcome::Status::Done) {
            transport.send_frame(
                Frame{MsgKind::OriginalsRequest, session, encode_element_list(inner.sender_only)});
            Frame response = transport.recv_frame();
            detail::check_session(response, session);
            if (response.kind != MsgKind::OriginalsResponse) {
                throw MalformedFrame("expected the originals behind the requested values");
            }
            auto groups = decode_originals_response<E>(response.body);
            if (groups.size() != inner.sender_only.size()) {
                throw MalformedFrame("originals response does not cover the request");
            }
            for (auto& [value, originals] : groups) {
                outcome.sender_only.insert(outcome.sender_only.end(), originals.begin(),
                                           originals.end());
                set.insert(set.end(), originals.begin(), originals.end());
            }

            std::vector<E> mine;
            for (std::uint64_t value : inner.receiver_only) {
                auto it = mapping.originals_of.find(value);
                if (it == mapping.originals_of.end()) {
                    throw Error("decoded a receiver-side value this side never produced");
                }
                mine.insert(mine.end(), it->second.begin(), it->second.end());
            }
            outcome.receiver_only.insert(outcome.receiver_only.end(), mine.begin(), mine.end());
            transport.send_frame(Frame{MsgKind::DiffPayload, session, encode_element_list(mine)});
        }

        Frame digest_frame = transport.recv_frame();
        detail::check_session(digest_frame, session);
        if (digest_frame.kind != MsgKind::DigestExchange) throw MalformedFrame("expected a digest");
        SyncDigest theirs = decode_digest(digest_frame.body);
        transport.send_frame(Frame{MsgKind::DigestExchange, session, encode_digest(digest(set))});
        if (theirs == digest(set)) break;
    }
    outcome.wire_bytes = transport.bytes_sent() + transport.bytes_received();
    return outcome;
}

// Drives both parties in process; set1 is the cell sender. Returns the
// receiver-side outcome; both sets end as the union.
template <typename E>
ReduceOutcomeT<E> universe_reduce_sync(std::vector<E>& set1, std::vector<E>& set2,
                                       std::uint64_t delta_max_collisions, Family family,
                                       std::uint64_t seed,
                                       std::uint32_t round_cap = kDefaultRoundCap);

extern template ReduceOutcome universe_reduce_sync<std::uint64_t>(std::vector<std::uint64_t>&,
                                                                  std::vector<std::uint64_t>&,
                                                                  std::uint64_t, Family,
                                                                  std::uint64_t, std::uint32_t);
extern template RawReduceOutcome universe_reduce_sync<u256>(std::vector<u256>&, std::vector<u256>&,
                                                            std::uint64_t, Family, std::uint64_t,
                                                            std::uint32_t);

} // namespace certainsync
