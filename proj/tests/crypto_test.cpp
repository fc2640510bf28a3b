// Copyright 2026 The cipherpdp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cipherpdp/crypto.hpp"

#include <gtest/gtest.h>

#include <set>

namespace cipherpdp {
namespace {

TEST(CryptoTest, Sha256KnownAnswer) {
  auto d = sha256(as_bytes("abc"));
  EXPECT_EQ(bytes_to_hex(d),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

// RFC 4231, test case 2.
TEST(CryptoTest, HmacSha256KnownAnswer) {
  auto d = hmac_sha256(as_bytes("Jefe"), as_bytes("what do ya want for nothing?"));
  EXPECT_EQ(bytes_to_hex(d),
            "5bdcc146bf60754e6a042426089575c75a003f089d2739839dec58b964ec3843");
}

TEST(CryptoTest, DeterministicRngReproduces) {
  DeterministicRng a("seed");
  DeterministicRng b("seed");
  DeterministicRng c("other");
  Bytes x = random_bytes(a, 100);
  EXPECT_EQ(x, random_bytes(b, 100));
  EXPECT_NE(x, random_bytes(c, 100));
}

TEST(CryptoTest, DeterministicRngSplitReadsMatchOneRead) {
  DeterministicRng a("seed");
  DeterministicRng b("seed");
  Bytes whole = random_bytes(a, 70);
  Bytes first = random_bytes(b, 33);
  Bytes rest = random_bytes(b, 37);
  first.insert(first.end(), rest.begin(), rest.end());
  EXPECT_EQ(whole, first);
}

TEST(CryptoTest, UniformBelowStaysInRangeAndCoversIt) {
  DeterministicRng rng("range");
  std::set<long> seen;
  for (int i = 0; i < 2000; ++i) {
    BigInt v = uniform_below(rng, 11);
    ASSERT_GE(v, 0);
    ASSERT_LT(v, 11);
    seen.insert(v.get_si());
  }
  EXPECT_EQ(seen.size(), 11u);
}

TEST(CryptoTest, UniformNonzeroExcludesZero) {
  DeterministicRng rng("nonzero");
  std::set<long> seen;
  for (int i = 0; i < 2000; ++i) {
    BigInt v = uniform_nonzero_below(rng, 11);
    ASSERT_GE(v, 1);
    ASSERT_LT(v, 11);
    seen.insert(v.get_si());
  }
  EXPECT_EQ(seen.size(), 10u);
}

TEST(CryptoTest, UniformBitsSetsTopBit) {
  DeterministicRng rng("bits");
  for (unsigned bits : {2u, 8u, 65u, 160u}) {
    BigInt v = uniform_bits(rng, bits);
    EXPECT_EQ(mpz_sizeinbase(v.get_mpz_t(), 2), bits);
  }
}

TEST(CryptoTest, SystemRngProducesDistinctBlocks) {
  SystemRng rng;
  EXPECT_NE(random_bytes(rng, 32), random_bytes(rng, 32));
}

}  // namespace
}  // namespace cipherpdp
