#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "certainsync/wire.hpp"

namespace certainsync {

// Frame transport over a connected TCP socket; owns the descriptor.
class TcpTransport : public Transport {
public:
    explicit TcpTransport(int fd);
    ~TcpTransport() override;

    TcpTransport(const TcpTransport&) = delete;
    TcpTransport& operator=(const TcpTransport&) = delete;

    void send_frame(const Frame& frame) override;
    Frame recv_frame() override;
    std::uint64_t bytes_sent() const override { return sent_; }
    std::uint64_t bytes_received() const override { return received_; }

private:
    void read_exact(std::uint8_t* buf, std::size_t len);

    int fd_;
    std::uint64_t sent_ = 0;
    std::uint64_t received_ = 0;
};

// Accepting side; port 0 picks a free port, readable afterwards via port().
class TcpListener {
public:
    explicit TcpListener(std::uint16_t port);
    ~TcpListener();

    TcpListener(const TcpListener&) = delete;
    TcpListener& operator=(const TcpListener&) = delete;

    std::uint16_t port() const { return port_; }
    std::unique_ptr<TcpTransport> accept_one();

private:
    int fd_;
    std::uint16_t port_;
};

std::unique_ptr<TcpTransport> tcp_connect(const std::string& host, std::uint16_t port);

} // namespace certainsync
