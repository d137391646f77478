#include "certainsync/net.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <vector>

#include "certainsync/errors.hpp"

namespace certainsync {

namespace {

[[noreturn]] void throw_errno(const std::string& what) {
    throw Error(what + ": " + std::strerror(errno));
}

} // namespace

TcpTransport::TcpTransport(int fd) : fd_(fd) {
    int one = 1;
    ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

TcpTransport::~TcpTransport() {
    if (fd_ >= 0) ::close(fd_);
}

void TcpTransport::send_frame(const Frame& frame) {
    std::vector<std::uint8_t> bytes = encode_frame(frame);
    std::size_t off = 0;
    while (off < bytes.size()) {
        ssize_t k = ::send(fd_, bytes.data() + off, bytes.size() - off, MSG_NOSIGNAL);
        if (k < 0) {
            if (errno == EINTR) continue;
            throw_errno("send");
        }
        off += static_cast<std::size_t>(k);
    }
    sent_ += bytes.size();
}

void TcpTransport::read_exact(std::uint8_t* buf, std::size_t len) {
    std::size_t off = 0;
    while (off < len) {
        ssize_t k = ::recv(fd_, buf + off, len - off, 0);
        if (k == 0) throw Error("connection closed while waiting for a frame");
        if (k < 0) {
            if (errno == EINTR) continue;
            throw_errno("recv");
        }
        off += static_cast<std::size_t>(k);
    }
    received_ += len;
}

Frame TcpTransport::recv_frame() {
    std::uint8_t prefix[4];
    read_exact(prefix, 4);
    std::uint32_t body_len = (std::uint32_t(prefix[0]) << 24) | (std::uint32_t(prefix[1]) << 16) |
                             (std::uint32_t(prefix[2]) << 8) | std::uint32_t(prefix[3]);
    if (body_len < 9 || body_len > kMaxFrameBody + 9) {
        throw MalformedFrame("frame length " + std::to_string(body_len) + " out of range");
    }
    std::vector<std::uint8_t> whole(4 + body_len);
    std::memcpy(whole.data(), prefix, 4);
    read_exact(whole.data() + 4, body_len);
    return decode_frame(whole.data(), whole.size());
}

TcpListener::TcpListener(std::uint16_t port) : fd_(-1), port_(0) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd_ < 0) throw_errno("socket");
    int one = 1;
    ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));

    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_ANY);
    addr.sin_port = htons(port);
    if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0) {
        int err = errno;
        ::close(fd_);
        errno = err;
        throw_errno("bind");
    }
    if (::listen(fd_, 1) < 0) {
        int err = errno;
        ::close(fd_);
        errno = err;
        throw_errno("listen");
    }
    socklen_t len = sizeof(addr);
    if (::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len) < 0) {
        int err = errno;
        ::close(fd_);
        errno = err;
        throw_errno("getsockname");
    }
    port_ = ntohs(addr.sin_port);
}

TcpListener::~TcpListener() {
    if (fd_ >= 0) ::close(fd_);
}

std::unique_ptr<TcpTransport> TcpListener::accept_one() {
    while (true) {
        int client = ::accept(fd_, nullptr, nullptr);
        if (client < 0) {
            if (errno == EINTR) continue;
            throw_errno("accept");
        }
        return std::make_unique<TcpTransport>(client);
    }
}

std::unique_ptr<TcpTransport> tcp_connect(const std::string& host, std::uint16_t port) {
    addrinfo hints{};
    hints.ai_family = AF_INET;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    int rc = ::getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &res);
    if (rc != 0) throw Error("getaddrinfo: " + std::string(gai_strerror(rc)));

    int fd = -1;
    for (addrinfo* it = res; it != nullptr; it = it->ai_next) {
        fd = ::socket(it->ai_family, it->ai_socktype, it->ai_protocol);
        if (fd < 0) continue;
        if (::connect(fd, it->ai_addr, it->ai_addrlen) == 0) break;
        ::close(fd);
        fd = -1;
    }
    ::freeaddrinfo(res);
    if (fd < 0) throw Error("could not connect to " + host + ":" + std::to_string(port));
    return std::make_unique<TcpTransport>(fd);
}

} // namespace certainsync
