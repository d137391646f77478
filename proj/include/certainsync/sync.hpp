#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "certainsync/construction.hpp"
#include "certainsync/errors.hpp"
#include "certainsync/iblt.hpp"
#include "certainsync/wire.hpp"

namespace certainsync {

template <typename E>
struct ReconOutcomeT {
    enum class Status { Done, Exhausted };

    Status status = Status::Done;
    std::vector<E> receiver_only;
    std::vector<E> sender_only;
    std::uint64_t chunks_used = 0;
    std::uint64_t cells_used = 0;
    std::uint64_t bits_on_wire = 0; // cells_used x cell width, IBLT payload only
    std::uint64_t wire_bytes = 0;   // every frame byte in both directions
};

using ReconOutcome = ReconOutcomeT<std::uint64_t>;
using RawReconOutcome = ReconOutcomeT<u256>;

// Streams schedule-sized chunks until told to stop or the schedule runs out.
template <typename Mapper, typename E = typename Mapper::Element>
class SenderState {
public:
    SenderState(Mapper mapper, const std::vector<E>& set)
        : mapper_(std::move(mapper)), set_(HashedSet<E>::from_elements(set)) {
        if (mapper_.egh_universe() != 0) tracker_.emplace(mapper_.egh_universe());
    }

    // Cells of the next chunk, or nullopt once every further chunk is pointless.
    std::optional<std::pair<std::uint32_t, std::vector<Cell<E>>>> next_chunk() {
        std::uint64_t limit = mapper_.chunk_limit();
        if (limit != 0 && chunk_ == limit) return std::nullopt;
        if (tracker_ && tracker_->level() >= mapper_.egh_universe() && chunk_ > 0) {
            return std::nullopt;
        }
        ++chunk_;
        std::vector<Cell<E>> cells = encode_chunk(mapper_, set_, chunk_);
        if (tracker_) tracker_->on_chunk(cells.size());
        return std::make_pair(static_cast<std::uint32_t>(chunk_), std::move(cells));
    }

    std::uint64_t chunks_sent() const { return chunk_; }

private:
    Mapper mapper_;
    HashedSet<E> set_;
    std::uint64_t chunk_ = 0;
    std::optional<EghLevelTracker> tracker_;
};

// Mirrors the sender chunk by chunk, keeping the running difference sketch.
template <typename Mapper, typename E = typename Mapper::Element>
class ReceiverState {
public:
    ReceiverState(Mapper mapper, const std::vector<E>& set)
        : mapper_(std::move(mapper)), set_(HashedSet<E>::from_elements(set)) {}

    struct Step {
        bool done = false;
        PeelResult<E> result;
    };

    Step on_chunk(std::uint32_t index, const std::vector<Cell<E>>& sender_cells) {
        if (index != diff_.chunks() + 1) {
            throw ChunkGap("expected chunk " + std::to_string(diff_.chunks() + 1) + ", got " +
                           std::to_string(index));
        }
        if (sender_cells.size() != mapper_.chunk_size(index)) {
            throw MalformedFrame("chunk " + std::to_string(index) + " should span " +
                                 std::to_string(mapper_.chunk_size(index)) + " cells");
        }
        std::vector<Cell<E>> local = encode_chunk(mapper_, set_, index);
        for (std::size_t i = 0; i < local.size(); ++i) {
            local[i].count -= sender_cells[i].count;
            local[i].xor_sum ^= sender_cells[i].xor_sum;
            local[i].check_sum ^= sender_cells[i].check_sum;
        }
        diff_.append_chunk(local);
        cells_used_ += sender_cells.size();

        Step step;
        step.result = peel(mapper_, diff_);
        step.done = step.result.success;
        return step;
    }

    std::uint64_t cells_used() const { return cells_used_; }
    std::uint64_t chunks_used() const { return diff_.chunks(); }

private:
    Mapper mapper_;
    HashedSet<E> set_;
    Sketch<E> diff_;
    std::uint64_t cells_used_ = 0;
};

namespace detail {

inline void check_session(const Frame& frame, std::uint64_t session) {
    if (frame.session != session) throw MalformedFrame("frame from a different session");
}

inline HelloInfo hello_for(const SpecMapper& mapper) {
    return HelloInfo{mapper.spec.family, mapper.spec.n,
                     mapper.spec.family == Family::OLS ? mapper.spec.ols_order : 0,
                     static_cast<std::uint8_t>(ElementTraits<std::uint64_t>::byte_width)};
}

inline HelloInfo hello_for(const RawEghMapper&) {
    return HelloInfo{Family::EGH, 0, 0,
                     static_cast<std::uint8_t>(ElementTraits<u256>::byte_width)};
}

} // namespace detail

// Sender side of one reconciliation over a transport. Appends the receiver's
// diff payload to `set` so both parties converge on the union. When
// `with_hello` is false the session negotiation is assumed done by the caller.
template <typename Mapper, typename E = typename Mapper::Element>
ReconOutcomeT<E> run_sync_sender(Transport& transport, std::uint64_t session, const Mapper& mapper,
                                 std::vector<E>& set, bool with_hello = true,
                                 bool expect_diff_payload = true) {
    if (with_hello) {
        transport.send_frame(Frame{MsgKind::Hello, session, encode_hello(detail::hello_for(mapper))});
        Frame reply = transport.recv_frame();
        detail::check_session(reply, session);
        if (reply.kind == MsgKind::Abort) throw SpecMismatch("peer rejected session parameters");
        if (reply.kind != MsgKind::Hello) throw MalformedFrame("expected hello echo");
        if (decode_hello(reply.body) != detail::hello_for(mapper)) {
            throw SpecMismatch("peer negotiated different session parameters");
        }
    }

    ReconOutcomeT<E> outcome;
    SenderState<Mapper, E> state(mapper, set);
    bool stopped = false;
    while (!stopped) {
        auto chunk = state.next_chunk();
        if (!chunk) {
            transport.send_frame(Frame{MsgKind::Abort, session, encode_abort(AbortReason::Exhausted)});
            outcome.status = ReconOutcomeT<E>::Status::Exhausted;
            outcome.chunks_used = state.chunks_sent();
            outcome.bits_on_wire = outcome.cells_used * cell_wire_bytes<E>() * 8;
            outcome.wire_bytes = transport.bytes_sent() + transport.bytes_received();
            return outcome;
        }
        outcome.cells_used += chunk->second.size();
        transport.send_frame(
            Frame{MsgKind::ChunkData, session, encode_chunk_data(chunk->first, chunk->second)});
        Frame reply = transport.recv_frame();
        detail::check_session(reply, session);
        switch (reply.kind) {
            case MsgKind::Continue: break;
            case MsgKind::Stop: stopped = true; break;
            case MsgKind::Abort: throw Error("peer aborted the session");
            default: throw MalformedFrame("unexpected reply to a chunk");
        }
    }
    outcome.chunks_used = state.chunks_sent();
    outcome.bits_on_wire = outcome.cells_used * cell_wire_bytes<E>() * 8;

    if (expect_diff_payload) {
        Frame payload = transport.recv_frame();
        detail::check_session(payload, session);
        if (payload.kind != MsgKind::DiffPayload) throw MalformedFrame("expected diff payload");
        outcome.receiver_only = decode_element_list<E>(payload.body);
        set.insert(set.end(), outcome.receiver_only.begin(), outcome.receiver_only.end());
    }
    outcome.wire_bytes = transport.bytes_sent() + transport.bytes_received();
    return outcome;
}

// Receiver side of one reconciliation over a transport. Adds recovered
// sender-only elements to `set`; sends the receiver-only side back unless the
// caller suppresses the payload to exchange originals itself.
template <typename Mapper, typename E = typename Mapper::Element>
ReconOutcomeT<E> run_sync_receiver(Transport& transport, std::uint64_t session,
                                   const Mapper& mapper, std::vector<E>& set,
                                   bool with_hello = true, bool send_diff_payload = true) {
    if (with_hello) {
        Frame hello = transport.recv_frame();
        detail::check_session(hello, session);
        if (hello.kind != MsgKind::Hello) throw MalformedFrame("expected hello");
        if (decode_hello(hello.body) != detail::hello_for(mapper)) {
            transport.send_frame(
                Frame{MsgKind::Abort, session, encode_abort(AbortReason::SpecMismatch)});
            throw SpecMismatch("peer requested different session parameters");
        }
        transport.send_frame(Frame{MsgKind::Hello, session, encode_hello(detail::hello_for(mapper))});
    }

    ReconOutcomeT<E> outcome;
    ReceiverState<Mapper, E> state(mapper, set);
    while (true) {
        Frame frame = transport.recv_frame();
        detail::check_session(frame, session);
        if (frame.kind == MsgKind::Abort) {
            if (decode_abort(frame.body) == AbortReason::Exhausted) {
                outcome.status = ReconOutcomeT<E>::Status::Exhausted;
                outcome.chunks_used = state.chunks_used();
                outcome.cells_used = state.cells_used();
                outcome.bits_on_wire = outcome.cells_used * cell_wire_bytes<E>() * 8;
                outcome.wire_bytes = transport.bytes_sent() + transport.bytes_received();
                return outcome;
            }
            throw Error("peer aborted the session");
        }
        if (frame.kind != MsgKind::ChunkData) throw MalformedFrame("expected chunk data");
        auto [index, cells] = decode_chunk_data<E>(frame.body);
        auto step = state.on_chunk(index, cells);
        if (step.done) {
            transport.send_frame(Frame{MsgKind::Stop, session, {}});
            outcome.receiver_only = std::move(step.result.receiver_only);
            outcome.sender_only = std::move(step.result.sender_only);
            break;
        }
        transport.send_frame(Frame{MsgKind::Continue, session, {}});
    }
    outcome.chunks_used = state.chunks_used();
    outcome.cells_used = state.cells_used();
    outcome.bits_on_wire = outcome.cells_used * cell_wire_bytes<E>() * 8;

    set.insert(set.end(), outcome.sender_only.begin(), outcome.sender_only.end());
    if (send_diff_payload) {
        transport.send_frame(
            Frame{MsgKind::DiffPayload, session, encode_element_list(outcome.receiver_only)});
    }
    outcome.wire_bytes = transport.bytes_sent() + transport.bytes_received();
    return outcome;
}

// Drives both parties of one session over an in-process channel. `set1` is the
// sender, `set2` the receiver; both end up holding the union.
ReconOutcome reconcile_in_memory(const ConstructionSpec& spec, std::vector<std::uint64_t>& set1,
                                 std::vector<std::uint64_t>& set2);

RawReconOutcome reconcile_raw_in_memory(std::vector<u256>& set1, std::vector<u256>& set2);

} // namespace certainsync
