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

#include "cipherpdp/bigint.hpp"

#include "cipherpdp/error.hpp"

namespace cipherpdp {

namespace {

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

}  // namespace

std::string to_hex(const BigInt& value) {
  if (sgn(value) < 0) fail(Errc::invalid_argument, "negative big integer");
  return value.get_str(16);
}

BigInt bigint_from_hex(std::string_view hex) {
  if (hex.empty()) fail(Errc::parse_error, "empty hex integer");
  if (hex.size() > 1 && hex.front() == '0')
    fail(Errc::parse_error, "hex integer has leading zeros");
  for (char c : hex) {
    if (hex_digit(c) < 0)
      fail(Errc::parse_error, "invalid hex digit in integer");
  }
  return BigInt(std::string(hex), 16);
}

std::string bytes_to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0f]);
  }
  return out;
}

Bytes bytes_from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) fail(Errc::parse_error, "odd-length hex string");
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    int hi = hex_digit(hex[2 * i]);
    int lo = hex_digit(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) fail(Errc::parse_error, "invalid hex digit");
    out[i] = static_cast<std::uint8_t>(hi << 4 | lo);
  }
  return out;
}

std::size_t byte_length(const BigInt& value) {
  if (sgn(value) == 0) return 1;
  return (mpz_sizeinbase(value.get_mpz_t(), 2) + 7) / 8;
}

Bytes to_fixed_bytes(const BigInt& value, std::size_t width) {
  if (sgn(value) < 0) fail(Errc::invalid_argument, "negative big integer");
  std::size_t needed = sgn(value) == 0 ? 0 : byte_length(value);
  if (needed > width) fail(Errc::invalid_argument, "integer wider than field");
  Bytes out(width, 0);
  std::size_t count = 0;
  if (needed > 0) {
    mpz_export(out.data() + (width - needed), &count, 1, 1, 1, 0,
               value.get_mpz_t());
  }
  return out;
}

BigInt bigint_from_bytes(std::span<const std::uint8_t> bytes) {
  BigInt out;
  if (!bytes.empty())
    mpz_import(out.get_mpz_t(), bytes.size(), 1, 1, 1, 0, bytes.data());
  return out;
}

BigInt invert(const BigInt& a, const BigInt& m) {
  BigInt out;
  if (mpz_invert(out.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
    fail(Errc::invalid_argument, "element not invertible");
  return out;
}

}  // namespace cipherpdp
