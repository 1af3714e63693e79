#include "dacc/erasure_coding.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>

namespace dacc {

namespace gf256 {

std::uint8_t mul(std::uint8_t a, std::uint8_t b) {
  unsigned x = a;
  unsigned y = b;
  unsigned r = 0;
  while (y != 0) {
    if (y & 1u) r ^= x;
    y >>= 1;
    x <<= 1;
    if (x & 0x100u) x ^= kPolynomial;
  }
  return static_cast<std::uint8_t>(r);
}

std::uint8_t pow(std::uint8_t a, unsigned e) {
  std::uint8_t r = 1;
  std::uint8_t base = a;
  while (e != 0) {
    if (e & 1u) r = mul(r, base);
    base = mul(base, base);
    e >>= 1;
  }
  return r;
}

std::uint8_t inv(std::uint8_t a) {
  if (a == 0) throw std::domain_error("zero has no inverse in GF(2^8)");
  return pow(a, 254);
}

}  // namespace gf256

namespace {

// Full product table; encode/decode touch every payload byte.
const std::array<std::array<std::uint8_t, 256>, 256>& product_table() {
  static const auto table = [] {
    std::array<std::array<std::uint8_t, 256>, 256> t{};
    for (unsigned a = 0; a < 256; ++a)
      for (unsigned b = 0; b < 256; ++b)
        t[a][b] = gf256::mul(static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b));
    return t;
  }();
  return table;
}

using Matrix = std::vector<std::uint8_t>;  // row-major, n x n unless noted

// Gauss-Jordan inverse of an n x n matrix; throws if singular.
Matrix invert(Matrix a, int n) {
  Matrix out(static_cast<std::size_t>(n * n), 0);
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i * n + i)] = 1;
  auto at = [n](Matrix& m, int r, int c) -> std::uint8_t& {
    return m[static_cast<std::size_t>(r * n + c)];
  };
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    while (pivot < n && at(a, pivot, col) == 0) ++pivot;
    if (pivot == n) throw std::logic_error("singular coding submatrix");
    if (pivot != col)
      for (int c = 0; c < n; ++c) {
        std::swap(at(a, pivot, c), at(a, col, c));
        std::swap(at(out, pivot, c), at(out, col, c));
      }
    const std::uint8_t scale = gf256::inv(at(a, col, col));
    for (int c = 0; c < n; ++c) {
      at(a, col, c) = gf256::mul(at(a, col, c), scale);
      at(out, col, c) = gf256::mul(at(out, col, c), scale);
    }
    for (int r = 0; r < n; ++r) {
      if (r == col || at(a, r, col) == 0) continue;
      const std::uint8_t f = at(a, r, col);
      for (int c = 0; c < n; ++c) {
        at(a, r, c) ^= gf256::mul(f, at(a, col, c));
        at(out, r, c) ^= gf256::mul(f, at(out, col, c));
      }
    }
  }
  return out;
}

// out = sum_j coeff[j] * inputs[j], bytewise
void combine(std::span<const std::uint8_t> coeff, std::span<const Bytes* const> inputs,
             Bytes& out) {
  const auto& table = product_table();
  std::fill(out.begin(), out.end(), std::uint8_t{0});
  for (std::size_t j = 0; j < coeff.size(); ++j) {
    if (coeff[j] == 0) continue;
    const auto& row = table[coeff[j]];
    const Bytes& in = *inputs[j];
    for (std::size_t i = 0; i < out.size(); ++i) out[i] ^= row[in[i]];
  }
}

}  // namespace

void CodeSpec::validate() const {
  if (k < 1 || k > N || N > 255)
    throw std::invalid_argument("code parameters must satisfy 1 <= k <= N <= 255");
}

std::vector<std::uint8_t> generator_matrix(const CodeSpec& spec) {
  spec.validate();
  const int k = spec.k;
  const int N = spec.N;
  Matrix vandermonde(static_cast<std::size_t>(N * k));
  for (int r = 0; r < N; ++r) {
    const std::uint8_t point = gf256::pow(2, static_cast<unsigned>(r));
    for (int c = 0; c < k; ++c)
      vandermonde[static_cast<std::size_t>(r * k + c)] =
          gf256::pow(point, static_cast<unsigned>(c));
  }
  const Matrix top_inv =
      invert(Matrix(vandermonde.begin(), vandermonde.begin() + k * k), k);
  Matrix g(static_cast<std::size_t>(N * k), 0);
  for (int r = 0; r < N; ++r)
    for (int c = 0; c < k; ++c) {
      std::uint8_t acc = 0;
      for (int j = 0; j < k; ++j)
        acc ^= gf256::mul(vandermonde[static_cast<std::size_t>(r * k + j)],
                          top_inv[static_cast<std::size_t>(j * k + c)]);
      g[static_cast<std::size_t>(r * k + c)] = acc;
    }
  return g;
}

std::vector<CodedSegment> encode(const CodeSpec& spec, std::span<const Bytes> segments) {
  spec.validate();
  if (static_cast<int>(segments.size()) != spec.k)
    throw std::invalid_argument("encode expects exactly k source segments");
  const std::size_t len = segments.front().size();
  std::vector<const Bytes*> inputs;
  for (const Bytes& s : segments) {
    if (s.size() != len) throw std::invalid_argument("source segments differ in length");
    inputs.push_back(&s);
  }
  const Matrix g = generator_matrix(spec);
  std::vector<CodedSegment> out(static_cast<std::size_t>(spec.N));
  for (int r = 0; r < spec.N; ++r) {
    out[static_cast<std::size_t>(r)].sbs_index = r + 1;
    out[static_cast<std::size_t>(r)].payload.resize(len);
    combine(std::span(g).subspan(static_cast<std::size_t>(r * spec.k),
                                 static_cast<std::size_t>(spec.k)),
            inputs, out[static_cast<std::size_t>(r)].payload);
  }
  return out;
}

std::vector<Bytes> decode(const CodeSpec& spec, std::span<const CodedSegment> shares) {
  spec.validate();
  const int k = spec.k;
  if (static_cast<int>(shares.size()) < k)
    throw std::invalid_argument("need " + std::to_string(k) + " shares to decode, got " +
                                std::to_string(shares.size()));
  if (static_cast<int>(shares.size()) > k)
    throw std::invalid_argument("decode expects exactly k shares");

  std::vector<bool> seen(static_cast<std::size_t>(spec.N) + 1, false);
  const std::size_t len = shares.front().payload.size();
  std::vector<const Bytes*> inputs;
  for (const CodedSegment& s : shares) {
    if (s.sbs_index < 1 || s.sbs_index > spec.N)
      throw std::invalid_argument("share index out of range");
    if (seen[static_cast<std::size_t>(s.sbs_index)])
      throw std::invalid_argument("duplicate share index " + std::to_string(s.sbs_index));
    seen[static_cast<std::size_t>(s.sbs_index)] = true;
    if (s.payload.size() != len) throw std::invalid_argument("shares differ in length");
    inputs.push_back(&s.payload);
  }

  const Matrix g = generator_matrix(spec);
  Matrix sub(static_cast<std::size_t>(k * k));
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < k; ++c)
      sub[static_cast<std::size_t>(r * k + c)] = g[static_cast<std::size_t>(
          (shares[static_cast<std::size_t>(r)].sbs_index - 1) * k + c)];
  const Matrix recover = invert(std::move(sub), k);

  std::vector<Bytes> out(static_cast<std::size_t>(k), Bytes(len));
  for (int r = 0; r < k; ++r)
    combine(std::span(recover).subspan(static_cast<std::size_t>(r * k),
                                       static_cast<std::size_t>(k)),
            inputs, out[static_cast<std::size_t>(r)]);
  return out;
}

}  // namespace dacc
