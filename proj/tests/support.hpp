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

// Shared fixtures: parameter sets generated once per process and a small
// registry of users with their key shares.

#include <cstdint>
#include <map>
#include <string>

#include "cipherpdp/crypto.hpp"
#include "cipherpdp/sde.hpp"

namespace cipherpdp::testing {

// p = 23, q = 11, g = 2, x = 7 (so h = 13), identity hash.
inline const std::pair<sde::PublicParams, sde::MasterSecretKey>& toy_group() {
  static const auto group = sde::init_from_group(
      23, 11, 2, 7, Bytes{'t', 'o', 'y'}, sde::kHashIdentity);
  return group;
}

// 1024/160-bit group, fixed seed.
inline const std::pair<sde::PublicParams, sde::MasterSecretKey>& test_group() {
  static const auto group =
      sde::init(sde::Profile::test, Bytes{'f', 'i', 'x', 't', 'u', 'r', 'e'});
  return group;
}

// 2048/256-bit group, fixed seed.
inline const std::pair<sde::PublicParams, sde::MasterSecretKey>& prod_group() {
  static const auto group =
      sde::init(sde::Profile::prod, Bytes{'p', 'r', 'o', 'd'});
  return group;
}

// Users issued on first use; every server share is registered.
class World {
 public:
  explicit World(const std::pair<sde::PublicParams, sde::MasterSecretKey>& group,
                 std::string_view seed = "world")
      : params(group.first), msk(group.second), rng(seed) {}

  const sde::ClientKeySet& user(const std::string& id) {
    auto it = clients.find(id);
    if (it != clients.end()) return it->second;
    auto [client, server] = sde::keygen(msk, params, id, rng);
    keystore.insert(server);
    return clients.emplace(id, client).first->second;
  }

  sde::PublicParams params;
  sde::MasterSecretKey msk;
  sde::KeyStore keystore;
  std::map<std::string, sde::ClientKeySet> clients;
  DeterministicRng rng;
};

// Square-and-multiply on machine integers, independent of GMP.
inline std::uint64_t modpow(std::uint64_t base, std::uint64_t exp,
                            std::uint64_t mod) {
  std::uint64_t result = 1 % mod;
  base %= mod;
  while (exp > 0) {
    if (exp & 1) result = result * base % mod;
    base = base * base % mod;
    exp >>= 1;
  }
  return result;
}

}  // namespace cipherpdp::testing
