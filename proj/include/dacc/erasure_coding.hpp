#pragma once

// Systematic (k, N) MDS code over GF(2^8).
//
// Each fragment of k source segments is expanded into N coded segments,
// one per SBS; any k of them rebuild the fragment. The generator is
// V * inverse(V_top), where V is the N x k Vandermonde matrix on the points
// alpha^0 .. alpha^(N-1) (alpha = 2, primitive under 0x11D) and V_top its
// first k rows. The first k coded segments therefore equal the sources.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace dacc {

using Bytes = std::vector<std::uint8_t>;

namespace gf256 {

inline constexpr unsigned kPolynomial = 0x11D;

/// Carry-less product reduced modulo x^8 + x^4 + x^3 + x^2 + 1.
std::uint8_t mul(std::uint8_t a, std::uint8_t b);

/// Multiplicative inverse; throws std::domain_error for 0.
std::uint8_t inv(std::uint8_t a);

/// a^e with a^0 = 1.
std::uint8_t pow(std::uint8_t a, unsigned e);

}  // namespace gf256

struct CodeSpec {
  int k = 1;  // source segments per fragment
  int N = 1;  // coded segments, one per SBS

  /// Throws std::invalid_argument unless 1 <= k <= N <= 255.
  void validate() const;
};

struct CodedSegment {
  int sbs_index = 1;  // 1-based
  Bytes payload;
};

/// N x k generator matrix, row-major. Rows 0..k-1 form the identity.
std::vector<std::uint8_t> generator_matrix(const CodeSpec& spec);

/// Encodes k equal-length segments into N coded segments, indexed 1..N.
std::vector<CodedSegment> encode(const CodeSpec& spec, std::span<const Bytes> segments);

/// Rebuilds the k source segments from exactly k shares with distinct SBS
/// indices. Fewer than k shares is an error, never a partial decode.
std::vector<Bytes> decode(const CodeSpec& spec, std::span<const CodedSegment> shares);

}  // namespace dacc
