#include "certainsync/sync.hpp"

#include <exception>
#include <thread>

namespace certainsync {

namespace {

template <typename Mapper, typename E = typename Mapper::Element>
ReconOutcomeT<E> drive_pair(const Mapper& mapper, std::vector<E>& set1, std::vector<E>& set2) {
    auto [sender_side, receiver_side] = make_in_memory_pair();
    std::uint64_t session = 0x5b3df2c19a6e4d07ull;

    ReconOutcomeT<E> sender_outcome;
    std::exception_ptr sender_error;
    std::thread sender([&] {
        try {
            sender_outcome = run_sync_sender(*sender_side, session, mapper, set1);
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
    if (outcome.status == ReconOutcomeT<E>::Status::Exhausted) {
        throw ExhaustedBeforeDecode("construction ran out of chunks after " +
                                    std::to_string(outcome.chunks_used) +
                                    " with the difference still undecoded");
    }
    return outcome;
}

} // namespace

ReconOutcome reconcile_in_memory(const ConstructionSpec& spec, std::vector<std::uint64_t>& set1,
                                 std::vector<std::uint64_t>& set2) {
    return drive_pair(SpecMapper{spec}, set1, set2);
}

RawReconOutcome reconcile_raw_in_memory(std::vector<u256>& set1, std::vector<u256>& set2) {
    return drive_pair(RawEghMapper{}, set1, set2);
}

} // namespace certainsync
