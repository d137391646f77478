#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "certainsync/errors.hpp"

namespace certainsync {

// 256-bit unsigned value; limb 0 is least significant.
struct u256 {
    std::array<std::uint64_t, 4> limbs{};

    bool operator==(const u256&) const = default;

    std::strong_ordering operator<=>(const u256& other) const {
        for (int i = 3; i >= 0; --i) {
            if (limbs[i] != other.limbs[i]) {
                return limbs[i] < other.limbs[i] ? std::strong_ordering::less
                                                 : std::strong_ordering::greater;
            }
        }
        return std::strong_ordering::equal;
    }

    u256& operator^=(const u256& other) {
        for (int i = 0; i < 4; ++i) limbs[i] ^= other.limbs[i];
        return *this;
    }

    friend u256 operator^(u256 a, const u256& b) {
        a ^= b;
        return a;
    }

    bool is_zero() const {
        return (limbs[0] | limbs[1] | limbs[2] | limbs[3]) == 0;
    }

    std::uint64_t mod_small(std::uint64_t p) const {
        unsigned __int128 r = 0;
        for (int i = 3; i >= 0; --i) {
            r = ((r << 64) | limbs[i]) % p;
        }
        return static_cast<std::uint64_t>(r);
    }

    static u256 from_u64(std::uint64_t v) {
        u256 out;
        out.limbs[0] = v;
        return out;
    }

    void write_be(std::uint8_t* out) const {
        for (int limb = 3; limb >= 0; --limb) {
            std::uint64_t v = limbs[limb];
            for (int b = 0; b < 8; ++b) {
                out[(3 - limb) * 8 + b] = static_cast<std::uint8_t>(v >> (56 - 8 * b));
            }
        }
    }

    static u256 read_be(const std::uint8_t* in) {
        u256 out;
        for (int limb = 3; limb >= 0; --limb) {
            std::uint64_t v = 0;
            for (int b = 0; b < 8; ++b) {
                v = (v << 8) | in[(3 - limb) * 8 + b];
            }
            out.limbs[limb] = v;
        }
        return out;
    }

    std::string to_hex() const {
        static const char digits[] = "0123456789abcdef";
        std::uint8_t bytes[32];
        write_be(bytes);
        std::string out(64, '0');
        for (int i = 0; i < 32; ++i) {
            out[2 * i] = digits[bytes[i] >> 4];
            out[2 * i + 1] = digits[bytes[i] & 0xf];
        }
        return out;
    }

    static u256 from_hex(std::string_view hex) {
        if (hex.size() != 64) throw MalformedDataset("identifier must be 64 hex characters");
        std::uint8_t bytes[32];
        auto nibble = [](char c) -> int {
            if (c >= '0' && c <= '9') return c - '0';
            if (c >= 'a' && c <= 'f') return c - 'a' + 10;
            if (c >= 'A' && c <= 'F') return c - 'A' + 10;
            throw MalformedDataset("invalid hex digit in identifier");
        };
        for (int i = 0; i < 32; ++i) {
            bytes[i] = static_cast<std::uint8_t>((nibble(hex[2 * i]) << 4) | nibble(hex[2 * i + 1]));
        }
        return read_be(bytes);
    }
};

} // namespace certainsync
