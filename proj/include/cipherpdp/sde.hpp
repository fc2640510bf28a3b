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

// Multi-user searchable data encryption over a Schnorr subgroup.
//
// Every user holds a client share x1 of the master exponent x while the
// server keeps the complementary share x2 = x - x1 (mod q). Client-side
// ciphertexts and trapdoors are completed by the server into a
// user-independent form, so an element encrypted by one user matches a
// trapdoor produced by any other registered user.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cipherpdp/bigint.hpp"
#include "cipherpdp/crypto.hpp"

namespace cipherpdp::sde {

inline constexpr std::string_view kHashSha256 = "sha256";
// Fixed-width encoding of the group element itself; toy groups only.
inline constexpr std::string_view kHashIdentity = "identity";
inline constexpr std::string_view kPrfHmacSha256 = "hmac-sha256";

struct PublicParams {
  BigInt p;
  BigInt q;
  BigInt g;
  BigInt h;
  std::string hash_id{kHashSha256};
  std::string prf_id{kPrfHmacSha256};
  unsigned security_bits = 0;

  // Byte width of the group-element encoding fed to H.
  std::size_t element_width() const { return byte_length(p); }
  std::size_t digest_length() const;

  bool operator==(const PublicParams&) const = default;
};

struct MasterSecretKey {
  BigInt x;
  Bytes s;

  bool operator==(const MasterSecretKey&) const = default;
};

struct ClientKeySet {
  std::string user_id;
  BigInt x1;
  Bytes s;

  bool operator==(const ClientKeySet&) const = default;
};

struct ServerKeySet {
  std::string user_id;
  BigInt x2;

  bool operator==(const ServerKeySet&) const = default;
};

// Server-side map from identity to key share. Revocation is deletion.
class KeyStore {
 public:
  // False when the identity is already present.
  bool insert(ServerKeySet key);
  bool erase(const std::string& user_id);
  bool contains(const std::string& user_id) const;
  // Throws Error(user_not_found).
  const ServerKeySet& at(const std::string& user_id) const;

  std::size_t size() const { return entries_.size(); }
  const std::map<std::string, ServerKeySet>& entries() const {
    return entries_;
  }

  bool operator==(const KeyStore&) const = default;

 private:
  std::map<std::string, ServerKeySet> entries_;
};

struct ClientEncryptedElement {
  BigInt c1_hat;
  BigInt c2_hat;
  Bytes c3_hat;

  bool operator==(const ClientEncryptedElement&) const = default;
};

struct ServerEncryptedElement {
  BigInt c1;
  Bytes c2;

  bool operator==(const ServerEncryptedElement&) const = default;
};

struct ClientTrapdoor {
  BigInt t1;
  BigInt t2;

  bool operator==(const ClientTrapdoor&) const = default;
};

struct ServerTrapdoor {
  BigInt t;

  bool operator==(const ServerTrapdoor&) const = default;
};

enum class Profile {
  toy,   // p = 23, q = 11, g = 2, identity hash
  test,  // 1024-bit p, 160-bit q
  prod,  // 2048-bit p, 256-bit q
};

std::optional<Profile> parse_profile(std::string_view name);
std::string_view to_string(Profile profile);

struct InitOptions {
  unsigned p_bits = 2048;
  unsigned q_bits = 256;
  std::string hash_id{kHashSha256};
  // When set, generation is fully reproducible.
  std::optional<Bytes> seed;
  unsigned max_attempts = 1u << 20;
};

InitOptions options_for(Profile profile);

std::pair<PublicParams, MasterSecretKey> init(const InitOptions& options);
std::pair<PublicParams, MasterSecretKey> init(
    Profile profile, std::optional<Bytes> seed = std::nullopt);

// Builds parameters from explicit group values; used for the toy profile and
// fixtures. Validates the subgroup invariants.
std::pair<PublicParams, MasterSecretKey> init_from_group(
    const BigInt& p, const BigInt& q, const BigInt& g, const BigInt& x,
    Bytes prf_key, std::string_view hash_id);

// Throws Error(invalid_argument) when the subgroup invariants fail.
void validate(const PublicParams& params);

std::pair<ClientKeySet, ServerKeySet> keygen(const MasterSecretKey& msk,
                                             const PublicParams& params,
                                             const std::string& user_id,
                                             Rng& rng);

// PRF output mapped into Z*_q: HMAC(s, e) as a big-endian integer mod q,
// retried with an appended counter byte while the result is zero.
BigInt element_exponent(const PublicParams& params,
                        std::span<const std::uint8_t> prf_key,
                        std::string_view element);

Bytes hash_group_element(const PublicParams& params, const BigInt& z);

bool in_group(const PublicParams& params, const BigInt& z);

ClientEncryptedElement client_enc(std::string_view element,
                                  const ClientKeySet& key,
                                  const PublicParams& params, Rng& rng);
// client_enc with the exponent and blinding value supplied by the caller.
ClientEncryptedElement client_enc_with(const BigInt& sigma, const BigInt& r,
                                       const ClientKeySet& key,
                                       const PublicParams& params);

ServerEncryptedElement server_reenc(const ClientEncryptedElement& c,
                                    const ServerKeySet& key,
                                    const PublicParams& params);

ClientTrapdoor client_td(std::string_view element, const ClientKeySet& key,
                         const PublicParams& params, Rng& rng);
ClientTrapdoor client_td_with(const BigInt& sigma, const BigInt& r,
                              const ClientKeySet& key,
                              const PublicParams& params);

ServerTrapdoor server_td(const ClientTrapdoor& td, const ServerKeySet& key,
                         const PublicParams& params);

bool match(const ServerEncryptedElement& c, const ServerTrapdoor& t,
           const PublicParams& params);

}  // namespace cipherpdp::sde
