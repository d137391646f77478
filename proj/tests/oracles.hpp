// Independent reference implementations and pinned golden values used by the
// test suite. Everything here is deliberately written the slow, obvious way
// (trial division, exhaustive subset search, exact big-integer arithmetic) so
// that it cannot share bugs with the production code under test.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include "certainsync/construction.hpp"

namespace oracles {

inline bool is_prime_slow(std::uint64_t v) {
  if (v < 2) return false;
  for (std::uint64_t f = 2; f * f <= v; ++f) {
    if (v % f == 0) return false;
  }
  return true;
}

inline std::uint64_t nth_prime_slow(std::size_t index_one_based) {
  std::uint64_t v = 1;
  for (std::size_t seen = 0; seen < index_one_based;) {
    ++v;
    if (is_prime_slow(v)) ++seen;
  }
  return v;
}

// Smallest k such that the product of the first k primes is >= n^d,
// computed with exact arithmetic.
inline std::size_t smallest_prime_count_slow(std::uint64_t n, std::uint32_t d) {
  namespace mp = boost::multiprecision;
  mp::cpp_int target = 1;
  for (std::uint32_t i = 0; i < d; ++i) target *= n;
  mp::cpp_int product = 1;
  std::size_t k = 0;
  while (product < target) {
    ++k;
    product *= nth_prime_slow(k);
  }
  return k;
}

// Exhaustive stopping distance: the size of the smallest nonempty column
// subset in which no row touches exactly one selected column. A peeling
// decoder is guaranteed to finish for any difference strictly smaller than
// this. Requires cols small enough for 2^cols enumeration.
inline std::size_t stopping_distance_slow(const certainsync::BinaryMatrix& m) {
  const std::size_t cols = m.cols;
  std::size_t best = cols + 1;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << cols); ++mask) {
    const auto weight = static_cast<std::size_t>(__builtin_popcountll(mask));
    if (weight >= best) continue;
    bool stopping = true;
    for (std::size_t r = 0; r < m.rows && stopping; ++r) {
      std::size_t hits = 0;
      for (std::size_t c = 0; c < cols; ++c) {
        if (((mask >> c) & 1) && m.at(r, c)) ++hits;
      }
      if (hits == 1) stopping = false;
    }
    if (stopping) best = weight;
  }
  return best;
}

// Renders a matrix row as a 0/1 string for comparison against golden rows.
inline std::string row_string(const certainsync::BinaryMatrix& m, std::size_t r) {
  std::string s(m.cols, '0');
  for (std::size_t c = 0; c < m.cols; ++c) {
    if (m.at(r, c)) s[c] = '1';
  }
  return s;
}

inline certainsync::BinaryMatrix matrix_from_rows(const std::vector<std::string>& rows) {
  certainsync::BinaryMatrix m;
  m.rows = rows.size();
  m.cols = rows.empty() ? 0 : rows.front().size();
  m.bits.assign(m.rows * m.cols, 0);
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < m.cols; ++c) {
      m.bits[r * m.cols + c] = rows[r][c] == '1';
    }
  }
  return m;
}

// --- Golden mapping matrices (universe column e is 1-based, left to right).

// Prime-residue construction over n=5, first three chunks (rows 2+3+5).
inline const std::vector<std::string>& golden_prime_residue_5() {
  static const std::vector<std::string> rows = {
      "01010", "10101",                             // chunk 1 (mod 2)
      "00100", "10010", "01001",                    // chunk 2 (mod 3)
      "00001", "10000", "01000", "00100", "00010",  // chunk 3 (mod 5)
  };
  return rows;
}

// Orthogonal-Latin-squares construction over n=6 with order s=3, 3 chunks.
inline const std::vector<std::string>& golden_ols_6_order3() {
  static const std::vector<std::string> rows = {
      "111000", "000111", "000000",  // chunk 1
      "100001", "010100", "001010",  // chunk 2
      "100010", "010001", "001100",  // chunk 3
  };
  return rows;
}

// Extended-Hamming-style construction over n=8, all 3 chunks (rows 1+3+3).
inline const std::vector<std::string>& golden_hamming_8() {
  static const std::vector<std::string> rows = {
      "11111111",                          // chunk 1: parity over everything
      "00001111", "00110011", "01010101",  // chunk 2: binary digits of e-1
      "11110000", "11001100", "10101010",  // chunk 3: complements
  };
  return rows;
}

// A classic 4x8 parity-check-style matrix whose stopping distance is 3.
// Used to validate the stopping-distance implementations against each other.
inline const std::vector<std::string>& golden_parity_8() {
  static const std::vector<std::string> rows = {
      "11111111",
      "01010101",
      "00110011",
      "00001111",
  };
  return rows;
}

// --- Golden hash values, generated with an independent reference
// implementation of SipHash-2-4 that reproduces the published test vectors
// (empty message under key 000102..0f hashes to 0x726fdb47dd0e0e31).

// Canonical published vectors: key bytes 00..0f, message bytes 00,01,..,L-1.
struct SipVector {
  std::size_t len;
  std::uint64_t digest;
};

inline const std::array<SipVector, 8>& siphash_reference_vectors() {
  static const std::array<SipVector, 8> v = {{
      {0, 0x726fdb47dd0e0e31ULL},
      {1, 0x74f839c593dc67fdULL},
      {2, 0x0d6c8009d9a94f5aULL},
      {3, 0x85676696d7fb7e2dULL},
      {4, 0xcf2794e0277187b7ULL},
      {5, 0x18765564cd99a68dULL},
      {6, 0xcbc9466e58fee3ceULL},
      {7, 0xab0200f58b01d137ULL},
  }};
  return v;
}

// checksum_of for 64-bit elements (8-byte big-endian input, fixed keys).
struct ChecksumGolden {
  std::uint64_t element;
  std::uint64_t digest;
};

inline const std::array<ChecksumGolden, 10>& checksum_u64_goldens() {
  static const std::array<ChecksumGolden, 10> v = {{
      {1, 0xfd6952f8114330ecULL},
      {2, 0x5c6dd8d6399a411fULL},
      {3, 0xabe42e7b53ee9053ULL},
      {4, 0x77048aef8967a0f6ULL},
      {5, 0xeef8b8fa5c768748ULL},
      {6, 0x3ba0efbf64491993ULL},
      {7, 0x8e2d3840dfe00c93ULL},
      {8, 0x46328d49cb3caa9eULL},
      {5000, 0xad93c7a6132d1f3dULL},
      {123456789, 0xae981d09194087abULL},
  }};
  return v;
}

// checksum_of for 256-bit elements (32-byte big-endian input, fixed keys).
struct ChecksumGolden256 {
  const char* hex;  // 64 hex chars
  std::uint64_t digest;
};

inline const std::array<ChecksumGolden256, 4>& checksum_u256_goldens() {
  static const std::array<ChecksumGolden256, 4> v = {{
      {"0000000000000000000000000000000000000000000000000000000000000001",
       0xb9a24756f784e99eULL},
      {"0000000000000000000000000000000000000000000000000000000000000002",
       0x1c1d4a539bed43a5ULL},
      {"ffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffff",
       0x81fa042a5d3a2c28ULL},
      {"00000000000000000000000000000000000000000000000000000000deadbeef",
       0x0181eba0f9f7c656ULL},
  }};
  return v;
}

// salted_hash for 64-bit elements under salt 0x0123456789abcdef.
inline constexpr std::uint64_t kSaltGolden = 0x0123456789abcdefULL;

inline const std::array<ChecksumGolden, 3>& salted_u64_goldens() {
  static const std::array<ChecksumGolden, 3> v = {{
      {1, 0x84749d5a8527adaaULL},
      {2, 0x2154faed6483485fULL},
      {42, 0xb652011b56c56e9aULL},
  }};
  return v;
}

// splitmix64 outputs from seed 0 (reference stream).
inline const std::array<std::uint64_t, 3>& splitmix_goldens() {
  static const std::array<std::uint64_t, 3> v = {{
      0xe220a8397b1dcdafULL,
      0x6e789e6aa1b965f4ULL,
      0x06c45d188009454fULL,
  }};
  return v;
}

}  // namespace oracles
