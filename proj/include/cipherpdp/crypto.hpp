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

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

#include "cipherpdp/bigint.hpp"

namespace cipherpdp {

// Source of uniformly random bytes.
class Rng {
 public:
  virtual ~Rng() = default;
  virtual void fill(std::span<std::uint8_t> out) = 0;
};

// OpenSSL CSPRNG.
class SystemRng final : public Rng {
 public:
  void fill(std::span<std::uint8_t> out) override;
};

// SHA-256 in counter mode over a seed. Reproducible, for tests and
// seeded tooling only.
class DeterministicRng final : public Rng {
 public:
  explicit DeterministicRng(std::span<const std::uint8_t> seed);
  explicit DeterministicRng(std::string_view seed);

  void fill(std::span<std::uint8_t> out) override;

 private:
  void refill();

  Bytes seed_;
  std::uint64_t counter_ = 0;
  std::array<std::uint8_t, 32> block_{};
  std::size_t used_ = 32;
};

// Uniform in [0, bound) by rejection sampling.
BigInt uniform_below(Rng& rng, const BigInt& bound);
// Uniform in [1, bound - 1].
BigInt uniform_nonzero_below(Rng& rng, const BigInt& bound);
// Uniform with exactly `bits` bits (top bit set).
BigInt uniform_bits(Rng& rng, unsigned bits);

Bytes random_bytes(Rng& rng, std::size_t n);

std::array<std::uint8_t, 32> sha256(std::span<const std::uint8_t> data);
std::array<std::uint8_t, 32> hmac_sha256(std::span<const std::uint8_t> key,
                                         std::span<const std::uint8_t> data);

inline std::span<const std::uint8_t> as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

}  // namespace cipherpdp
