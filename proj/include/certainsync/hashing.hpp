#pragma once

#include <cstddef>
#include <cstdint>

namespace certainsync {

// Fixed published key of the checksum hash ("CertSync" / "IBLTChk0").
inline constexpr std::uint64_t kChecksumKey0 = 0x4365727453796e63ull;
inline constexpr std::uint64_t kChecksumKey1 = 0x49424c5443686b30ull;

std::uint64_t siphash24(const void* data, std::size_t len, std::uint64_t k0, std::uint64_t k1);

// SipHash-2-4 of the canonical big-endian encoding under the fixed key.
std::uint64_t checksum_hash_bytes(const void* data, std::size_t len);

// Same family with the salt folded into the key, for per-round universe reduction.
std::uint64_t salted_hash_bytes(const void* data, std::size_t len, std::uint64_t salt);

// splitmix64 step; advances state and returns the next output.
std::uint64_t splitmix64_next(std::uint64_t& state);

} // namespace certainsync
