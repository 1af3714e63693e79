#include <gtest/gtest.h>

#include <array>
#include <bit>
#include <random>
#include <set>

#include "dacc/erasure_coding.hpp"

using namespace dacc;

namespace {

// Log/antilog tables built by repeated doubling of the generator 2.
struct LogTables {
  std::array<int, 256> log{};
  std::array<std::uint8_t, 510> exp{};
  LogTables() {
    unsigned x = 1;
    for (int i = 0; i < 255; ++i) {
      exp[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(x);
      log[x] = i;
      x <<= 1;
      if (x & 0x100u) x ^= 0x11Du;
    }
    for (int i = 255; i < 510; ++i)
      exp[static_cast<std::size_t>(i)] = exp[static_cast<std::size_t>(i - 255)];
  }
  std::uint8_t mul(unsigned a, unsigned b) const {
    if (a == 0 || b == 0) return 0;
    return exp[static_cast<std::size_t>(log[a] + log[b])];
  }
};

std::vector<Bytes> random_segments(int k, std::size_t len, std::mt19937_64& rng) {
  std::vector<Bytes> out(static_cast<std::size_t>(k), Bytes(len));
  for (auto& s : out)
    for (auto& b : s) b = static_cast<std::uint8_t>(rng() & 0xFF);
  return out;
}

}  // namespace

TEST(Gf256, MultiplicationMatchesLogTables) {
  const LogTables t;
  for (unsigned a = 0; a < 256; ++a)
    for (unsigned b = 0; b < 256; ++b)
      ASSERT_EQ(gf256::mul(static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b)),
                t.mul(a, b))
          << a << " * " << b;
}

TEST(Gf256, Identities) {
  for (unsigned x = 0; x < 256; ++x) {
    const auto v = static_cast<std::uint8_t>(x);
    EXPECT_EQ(gf256::mul(0, v), 0);
    EXPECT_EQ(gf256::mul(1, v), v);
    if (x != 0) EXPECT_EQ(gf256::mul(v, gf256::inv(v)), 1);
  }
  EXPECT_EQ(gf256::mul(0x02, 0x8E), 0x01);
  EXPECT_EQ(gf256::inv(0x02), 0x8E);
  EXPECT_THROW(gf256::inv(0), std::domain_error);
  EXPECT_EQ(gf256::pow(2, 0), 1);
  EXPECT_EQ(gf256::pow(2, 8), 0x1D);
  EXPECT_EQ(gf256::pow(2, 255), 1);
}

TEST(Gf256, FieldLawsSpotCheck) {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 20000; ++i) {
    const auto a = static_cast<std::uint8_t>(rng()), b = static_cast<std::uint8_t>(rng()),
               c = static_cast<std::uint8_t>(rng());
    EXPECT_EQ(gf256::mul(a, gf256::mul(b, c)), gf256::mul(gf256::mul(a, b), c));
    EXPECT_EQ(gf256::mul(a, b ^ c), gf256::mul(a, b) ^ gf256::mul(a, c));
    EXPECT_EQ(gf256::mul(a, b), gf256::mul(b, a));
  }
}

TEST(CodeSpec, Validation) {
  EXPECT_NO_THROW((CodeSpec{3, 6}.validate()));
  EXPECT_THROW((CodeSpec{0, 3}.validate()), std::invalid_argument);
  EXPECT_THROW((CodeSpec{4, 3}.validate()), std::invalid_argument);
  EXPECT_THROW((CodeSpec{1, 256}.validate()), std::invalid_argument);
}

TEST(Generator, SystematicAndDistinctRows) {
  for (int N = 1; N <= 20; ++N) {
    for (int k = 1; k <= N; ++k) {
      const auto G = generator_matrix(CodeSpec{k, N});
      ASSERT_EQ(G.size(), static_cast<std::size_t>(N * k));
      for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c)
          EXPECT_EQ(G[static_cast<std::size_t>(r * k + c)], r == c ? 1 : 0);
      // k = 1 is the repetition code; from k = 2 on, any two rows are
      // independent and therefore distinct
      if (k == 1) {
        for (auto g : G) EXPECT_EQ(g, 1);
        continue;
      }
      std::set<std::vector<std::uint8_t>> rows;
      for (int r = 0; r < N; ++r)
        rows.emplace(G.begin() + r * k, G.begin() + (r + 1) * k);
      EXPECT_EQ(rows.size(), static_cast<std::size_t>(N)) << "k=" << k << " N=" << N;
    }
  }
}

TEST(Encode, RepetitionWhenKIsOne) {
  std::mt19937_64 rng(31);
  const auto src = random_segments(1, 16, rng);
  const auto coded = encode(CodeSpec{1, 3}, src);
  ASSERT_EQ(coded.size(), 3u);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(coded[static_cast<std::size_t>(i)].payload, src[0]);
    EXPECT_EQ(coded[static_cast<std::size_t>(i)].sbs_index, i + 1);
  }
}

TEST(Encode, CountLengthAndSystematicPrefix) {
  std::mt19937_64 rng(37);
  const auto src = random_segments(3, 8, rng);
  const auto coded = encode(CodeSpec{3, 7}, src);
  ASSERT_EQ(coded.size(), 7u);
  for (const auto& c : coded) EXPECT_EQ(c.payload.size(), 8u);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(coded[static_cast<std::size_t>(i)].payload, src[static_cast<std::size_t>(i)]);
}

TEST(Encode, RejectsBadInput) {
  std::mt19937_64 rng(41);
  auto src = random_segments(3, 8, rng);
  EXPECT_THROW(encode(CodeSpec{2, 4}, src), std::invalid_argument);
  src[1].push_back(0);
  EXPECT_THROW(encode(CodeSpec{3, 4}, src), std::invalid_argument);
  EXPECT_THROW(encode(CodeSpec{4, 3}, random_segments(4, 8, rng)), std::invalid_argument);
}

TEST(Decode, AnyTwoOfFour) {
  std::mt19937_64 rng(43);
  const auto src = random_segments(2, 32, rng);
  const auto coded = encode(CodeSpec{2, 4}, src);
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) {
      const std::vector<CodedSegment> shares{coded[static_cast<std::size_t>(a)],
                                             coded[static_cast<std::size_t>(b)]};
      EXPECT_EQ(decode(CodeSpec{2, 4}, shares), src);
    }
}

TEST(Decode, ExhaustiveSubsets) {
  std::mt19937_64 rng(47);
  for (int N = 1; N <= 12; ++N) {
    for (int k = 1; k <= N; ++k) {
      const CodeSpec spec{k, N};
      const auto src = random_segments(k, 64, rng);
      const auto coded = encode(spec, src);
      for (unsigned mask = 0; mask < (1u << N); ++mask) {
        if (std::popcount(mask) != k) continue;
        std::vector<CodedSegment> shares;
        for (int i = N - 1; i >= 0; --i)  // arbitrary order
          if (mask & (1u << i)) shares.push_back(coded[static_cast<std::size_t>(i)]);
        ASSERT_EQ(decode(spec, shares), src) << "k=" << k << " N=" << N << " mask=" << mask;
      }
    }
  }
}

TEST(Decode, Errors) {
  std::mt19937_64 rng(53);
  const CodeSpec spec{3, 6};
  const auto coded = encode(spec, random_segments(3, 8, rng));
  EXPECT_THROW(decode(spec, std::vector<CodedSegment>(coded.begin(), coded.begin() + 2)),
               std::invalid_argument);
  EXPECT_THROW(decode(spec, std::vector<CodedSegment>{coded[0], coded[0], coded[1]}),
               std::invalid_argument);
  auto bad = std::vector<CodedSegment>(coded.begin(), coded.begin() + 3);
  bad[2].sbs_index = 7;
  EXPECT_THROW(decode(spec, bad), std::invalid_argument);
  bad = std::vector<CodedSegment>(coded.begin(), coded.begin() + 3);
  bad[1].payload.pop_back();
  EXPECT_THROW(decode(spec, bad), std::invalid_argument);
}
