#include "certainsync/wire.hpp"

namespace certainsync {

namespace {

void write_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 7; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t read_u64(const std::vector<std::uint8_t>& body, std::size_t pos) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | body[pos + i];
    return v;
}

void require_size(const std::vector<std::uint8_t>& body, std::size_t expected, const char* what) {
    if (body.size() != expected) throw MalformedFrame(what);
}

} // namespace

std::vector<std::uint8_t> encode_frame(const Frame& frame) {
    if (frame.body.size() + 9 > kMaxFrameBody) throw MalformedFrame("frame body too large");
    std::uint32_t body_len = static_cast<std::uint32_t>(frame.body.size() + 9);
    std::vector<std::uint8_t> out;
    out.reserve(4 + body_len);
    out.push_back(static_cast<std::uint8_t>(body_len >> 24));
    out.push_back(static_cast<std::uint8_t>(body_len >> 16));
    out.push_back(static_cast<std::uint8_t>(body_len >> 8));
    out.push_back(static_cast<std::uint8_t>(body_len));
    out.push_back(static_cast<std::uint8_t>(frame.kind));
    write_u64(out, frame.session);
    out.insert(out.end(), frame.body.begin(), frame.body.end());
    return out;
}

Frame decode_frame(const std::uint8_t* data, std::size_t len) {
    if (len < 13) throw MalformedFrame("frame shorter than its fixed header");
    std::uint32_t body_len = (std::uint32_t(data[0]) << 24) | (std::uint32_t(data[1]) << 16) |
                             (std::uint32_t(data[2]) << 8) | std::uint32_t(data[3]);
    if (body_len < 9 || body_len > kMaxFrameBody) throw MalformedFrame("frame length out of range");
    if (len != 4 + static_cast<std::size_t>(body_len)) {
        throw MalformedFrame("frame length prefix disagrees with payload");
    }
    Frame frame;
    std::uint8_t kind = data[4];
    if (kind < 1 || kind > 11) throw MalformedFrame("unknown message kind");
    frame.kind = static_cast<MsgKind>(kind);
    std::uint64_t session = 0;
    for (int i = 0; i < 8; ++i) session = (session << 8) | data[5 + i];
    frame.session = session;
    frame.body.assign(data + 13, data + len);
    return frame;
}

std::vector<std::uint8_t> encode_hello(const HelloInfo& info) {
    std::vector<std::uint8_t> body;
    body.push_back(static_cast<std::uint8_t>(info.family));
    write_u64(body, info.n);
    write_u64(body, info.ols_order);
    body.push_back(info.element_width);
    return body;
}

HelloInfo decode_hello(const std::vector<std::uint8_t>& body) {
    require_size(body, 18, "hello payload must be 18 bytes");
    HelloInfo info;
    if (body[0] < 1 || body[0] > 3) throw MalformedFrame("unknown construction family");
    info.family = static_cast<Family>(body[0]);
    info.n = read_u64(body, 1);
    info.ols_order = read_u64(body, 9);
    info.element_width = body[17];
    if (info.element_width != 8 && info.element_width != 32) {
        throw MalformedFrame("element width must be 8 or 32 bytes");
    }
    return info;
}

std::vector<std::uint8_t> encode_reduced_hello(const ReducedHelloInfo& info) {
    std::vector<std::uint8_t> body;
    body.push_back(static_cast<std::uint8_t>(info.round >> 24));
    body.push_back(static_cast<std::uint8_t>(info.round >> 16));
    body.push_back(static_cast<std::uint8_t>(info.round >> 8));
    body.push_back(static_cast<std::uint8_t>(info.round));
    write_u64(body, info.reduced_n);
    write_u64(body, info.delta_max);
    body.push_back(static_cast<std::uint8_t>(info.family));
    body.push_back(info.element_width);
    return body;
}

ReducedHelloInfo decode_reduced_hello(const std::vector<std::uint8_t>& body) {
    require_size(body, 22, "reduced hello payload must be 22 bytes");
    ReducedHelloInfo info;
    info.round = (std::uint32_t(body[0]) << 24) | (std::uint32_t(body[1]) << 16) |
                 (std::uint32_t(body[2]) << 8) | std::uint32_t(body[3]);
    info.reduced_n = read_u64(body, 4);
    info.delta_max = read_u64(body, 12);
    if (body[20] < 1 || body[20] > 3) throw MalformedFrame("unknown construction family");
    info.family = static_cast<Family>(body[20]);
    info.element_width = body[21];
    return info;
}

std::vector<std::uint8_t> encode_digest(const SyncDigest& digest) {
    std::vector<std::uint8_t> body;
    write_u64(body, digest.cardinality);
    write_u64(body, digest.xor_hash);
    return body;
}

SyncDigest decode_digest(const std::vector<std::uint8_t>& body) {
    require_size(body, 16, "digest payload must be 16 bytes");
    return SyncDigest{read_u64(body, 0), read_u64(body, 8)};
}

std::vector<std::uint8_t> encode_size_handshake(std::uint64_t set_size) {
    std::vector<std::uint8_t> body;
    write_u64(body, set_size);
    return body;
}

std::uint64_t decode_size_handshake(const std::vector<std::uint8_t>& body) {
    require_size(body, 8, "size handshake payload must be 8 bytes");
    return read_u64(body, 0);
}

std::vector<std::uint8_t> encode_abort(AbortReason reason) {
    return {static_cast<std::uint8_t>(reason)};
}

AbortReason decode_abort(const std::vector<std::uint8_t>& body) {
    require_size(body, 1, "abort payload must be 1 byte");
    if (body[0] < 1 || body[0] > 3) throw MalformedFrame("unknown abort reason");
    return static_cast<AbortReason>(body[0]);
}

namespace {

struct SharedQueue {
    std::mutex mutex;
    std::condition_variable ready;
    std::deque<std::vector<std::uint8_t>> messages;
    bool closed = false;

    void push(std::vector<std::uint8_t> bytes) {
        {
            std::lock_guard<std::mutex> lock(mutex);
            messages.push_back(std::move(bytes));
        }
        ready.notify_one();
    }

    std::vector<std::uint8_t> pop() {
        std::unique_lock<std::mutex> lock(mutex);
        ready.wait(lock, [this] { return !messages.empty() || closed; });
        if (messages.empty()) throw Error("channel closed while waiting for a frame");
        std::vector<std::uint8_t> bytes = std::move(messages.front());
        messages.pop_front();
        return bytes;
    }

    void close() {
        {
            std::lock_guard<std::mutex> lock(mutex);
            closed = true;
        }
        ready.notify_all();
    }
};

class InMemoryTransport : public Transport {
public:
    InMemoryTransport(std::shared_ptr<SharedQueue> out, std::shared_ptr<SharedQueue> in)
        : out_(std::move(out)), in_(std::move(in)) {}

    ~InMemoryTransport() override { out_->close(); }

    void send_frame(const Frame& frame) override {
        std::vector<std::uint8_t> bytes = encode_frame(frame);
        sent_ += bytes.size();
        out_->push(std::move(bytes));
    }

    Frame recv_frame() override {
        std::vector<std::uint8_t> bytes = in_->pop();
        received_ += bytes.size();
        return decode_frame(bytes.data(), bytes.size());
    }

    std::uint64_t bytes_sent() const override { return sent_; }
    std::uint64_t bytes_received() const override { return received_; }

private:
    std::shared_ptr<SharedQueue> out_;
    std::shared_ptr<SharedQueue> in_;
    std::uint64_t sent_ = 0;
    std::uint64_t received_ = 0;
};

} // namespace

std::pair<std::unique_ptr<Transport>, std::unique_ptr<Transport>> make_in_memory_pair() {
    auto a_to_b = std::make_shared<SharedQueue>();
    auto b_to_a = std::make_shared<SharedQueue>();
    return {std::make_unique<InMemoryTransport>(a_to_b, b_to_a),
            std::make_unique<InMemoryTransport>(b_to_a, a_to_b)};
}

} // namespace certainsync
