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

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cipherpdp {

using BigInt = mpz_class;
using Bytes = std::vector<std::uint8_t>;

// Lowercase big-endian hex without leading zeros; zero encodes as "0".
std::string to_hex(const BigInt& value);
// Strict inverse of to_hex: rejects uppercase, signs and leading zeros.
BigInt bigint_from_hex(std::string_view hex);

std::string bytes_to_hex(std::span<const std::uint8_t> bytes);
Bytes bytes_from_hex(std::string_view hex);

// Big-endian encoding left-padded with zeros to exactly `width` bytes.
Bytes to_fixed_bytes(const BigInt& value, std::size_t width);
BigInt bigint_from_bytes(std::span<const std::uint8_t> bytes);

std::size_t byte_length(const BigInt& value);

inline BigInt powm(const BigInt& base, const BigInt& exp, const BigInt& mod) {
  BigInt out;
  mpz_powm(out.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(),
           mod.get_mpz_t());
  return out;
}

inline BigInt mod(const BigInt& a, const BigInt& m) {
  BigInt out;
  mpz_mod(out.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return out;
}

BigInt invert(const BigInt& a, const BigInt& m);

}  // namespace cipherpdp
