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

#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/rand.h>

#include <algorithm>

#include "cipherpdp/error.hpp"

namespace cipherpdp {

void SystemRng::fill(std::span<std::uint8_t> out) {
  if (out.empty()) return;
  if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1)
    fail(Errc::generation_failed, "RAND_bytes failed");
}

DeterministicRng::DeterministicRng(std::span<const std::uint8_t> seed)
    : seed_(seed.begin(), seed.end()) {}

DeterministicRng::DeterministicRng(std::string_view seed)
    : DeterministicRng(as_bytes(seed)) {}

void DeterministicRng::refill() {
  Bytes input = seed_;
  for (int i = 7; i >= 0; --i)
    input.push_back(static_cast<std::uint8_t>(counter_ >> (8 * i)));
  ++counter_;
  block_ = sha256(input);
  used_ = 0;
}

void DeterministicRng::fill(std::span<std::uint8_t> out) {
  std::size_t pos = 0;
  while (pos < out.size()) {
    if (used_ == block_.size()) refill();
    std::size_t n = std::min(out.size() - pos, block_.size() - used_);
    std::copy_n(block_.begin() + used_, n, out.begin() + pos);
    used_ += n;
    pos += n;
  }
}

Bytes random_bytes(Rng& rng, std::size_t n) {
  Bytes out(n);
  rng.fill(out);
  return out;
}

BigInt uniform_below(Rng& rng, const BigInt& bound) {
  if (sgn(bound) <= 0) fail(Errc::invalid_argument, "empty sampling range");
  std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
  std::size_t nbytes = (bits + 7) / 8;
  unsigned excess = static_cast<unsigned>(nbytes * 8 - bits);
  Bytes buf(nbytes);
  for (;;) {
    rng.fill(buf);
    buf[0] &= static_cast<std::uint8_t>(0xff >> excess);
    BigInt candidate = bigint_from_bytes(buf);
    if (candidate < bound) return candidate;
  }
}

BigInt uniform_nonzero_below(Rng& rng, const BigInt& bound) {
  if (bound <= 1) fail(Errc::invalid_argument, "empty sampling range");
  BigInt span = bound - 1;
  return uniform_below(rng, span) + 1;
}

BigInt uniform_bits(Rng& rng, unsigned bits) {
  if (bits == 0) fail(Errc::invalid_argument, "zero-bit integer");
  std::size_t nbytes = (bits + 7) / 8;
  unsigned excess = static_cast<unsigned>(nbytes * 8 - bits);
  Bytes buf(nbytes);
  rng.fill(buf);
  buf[0] &= static_cast<std::uint8_t>(0xff >> excess);
  buf[0] |= static_cast<std::uint8_t>(0x80 >> excess);
  return bigint_from_bytes(buf);
}

std::array<std::uint8_t, 32> sha256(std::span<const std::uint8_t> data) {
  std::array<std::uint8_t, 32> out{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(),
                 nullptr) != 1)
    fail(Errc::invalid_argument, "sha256 failed");
  return out;
}

std::array<std::uint8_t, 32> hmac_sha256(std::span<const std::uint8_t> key,
                                         std::span<const std::uint8_t> data) {
  std::array<std::uint8_t, 32> out{};
  unsigned int len = 0;
  if (HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()),
           data.data(), data.size(), out.data(), &len) == nullptr)
    fail(Errc::invalid_argument, "hmac-sha256 failed");
  return out;
}

}  // namespace cipherpdp
