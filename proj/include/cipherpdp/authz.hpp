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

// Encrypted <subject, action, target> policies with encrypted condition
// trees. Client-side functions run in the trusted domain (admin, requester,
// PIP) and need a client key; server-side functions only touch the key
// store and never see cleartext elements.

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cipherpdp/attributes.hpp"
#include "cipherpdp/policy.hpp"
#include "cipherpdp/sde.hpp"

namespace cipherpdp::authz {

using ClientConditionTree = TreeNode<sde::ClientEncryptedElement>;
using EncryptedConditionTree = TreeNode<sde::ServerEncryptedElement>;

struct ClientEncryptedTuple {
  std::array<sde::ClientEncryptedElement, 3> elements;  // S, A, T
};

struct ServerEncryptedTuple {
  std::array<sde::ServerEncryptedElement, 3> elements;

  bool operator==(const ServerEncryptedTuple&) const = default;
};

struct ClientEncryptedPolicy {
  ClientEncryptedTuple tuple;
  std::optional<ClientConditionTree> condition;
};

struct EncryptedPolicy {
  std::string policy_id;
  ServerEncryptedTuple tuple;
  std::optional<EncryptedConditionTree> condition;

  bool operator==(const EncryptedPolicy&) const = default;
};

struct EncryptedRequestTuple {
  std::string requester_id;
  std::array<sde::ClientTrapdoor, 3> trapdoors;
};

struct EncryptedAttributeList {
  std::string source_id;
  std::vector<sde::ClientTrapdoor> items;
};

// --- client side -----------------------------------------------------------

ClientConditionTree condition_enc(const ConditionTree& tree,
                                  const sde::ClientKeySet& key,
                                  const sde::PublicParams& params, Rng& rng);

ClientEncryptedTuple sat_enc(const SatTuple& tuple,
                             const sde::ClientKeySet& key,
                             const sde::PublicParams& params, Rng& rng);

ClientEncryptedPolicy policy_enc(const PolicySpec& policy,
                                 const sde::ClientKeySet& key,
                                 const sde::PublicParams& params, Rng& rng);

EncryptedRequestTuple sat_request(const SatTuple& tuple,
                                  const sde::ClientKeySet& key,
                                  const sde::PublicParams& params, Rng& rng);

EncryptedAttributeList attributes_request(const AttributeSet& attrs,
                                          const sde::ClientKeySet& key,
                                          const sde::PublicParams& params,
                                          Rng& rng);

// --- server side -----------------------------------------------------------

EncryptedConditionTree condition_reenc(const ClientConditionTree& tree,
                                       const std::string& admin_id,
                                       const sde::KeyStore& keystore,
                                       const sde::PublicParams& params);

ServerEncryptedTuple sat_reenc(const ClientEncryptedTuple& tuple,
                               const std::string& admin_id,
                               const sde::KeyStore& keystore,
                               const sde::PublicParams& params);

EncryptedPolicy policy_reenc(const ClientEncryptedPolicy& policy,
                             const std::string& admin_id,
                             const sde::KeyStore& keystore,
                             const sde::PublicParams& params);

// Ids of every stored policy whose S, A and T all match the request.
std::vector<std::string> sat_search(const EncryptedRequestTuple& request,
                                    std::span<const EncryptedPolicy> store,
                                    const sde::KeyStore& keystore,
                                    const sde::PublicParams& params);

std::vector<sde::ServerTrapdoor> server_trapdoors(
    const EncryptedAttributeList& attrs, const sde::KeyStore& keystore,
    const sde::PublicParams& params);

// A leaf holds when some attribute trapdoor matches it; an absent condition
// always holds.
bool condition_holds(const std::optional<EncryptedConditionTree>& condition,
                     std::span<const sde::ServerTrapdoor> attributes,
                     const sde::PublicParams& params);

bool condition_evaluation(const EncryptedAttributeList& attrs,
                          const EncryptedPolicy& policy,
                          const sde::KeyStore& keystore,
                          const sde::PublicParams& params);

// True when the user was present and has been removed. Stored ciphertexts
// are untouched.
bool user_revocation(const std::string& user_id, sde::KeyStore& keystore);

// Stored policies with stable ids "policy-<n>".
class PolicyStore {
 public:
  std::string add(EncryptedPolicy policy);
  bool remove(const std::string& policy_id);

  std::span<const EncryptedPolicy> policies() const { return policies_; }
  std::uint64_t next_id() const { return next_id_; }

  // Restores a persisted store; ids must be unique.
  static PolicyStore restore(std::vector<EncryptedPolicy> policies,
                             std::uint64_t next_id);

  bool operator==(const PolicyStore&) const = default;

 private:
  std::vector<EncryptedPolicy> policies_;
  std::uint64_t next_id_ = 1;
};

struct Decision {
  bool permit = false;
  std::vector<std::string> matched;
  // "permit", "no-matching-policy" or "condition-not-satisfied".
  std::string reason;
};

// Permit iff some policy matches the tuple and its condition holds for the
// supplied attributes.
Decision evaluate_request(const EncryptedRequestTuple& request,
                          const EncryptedAttributeList* attrs,
                          const PolicyStore& store,
                          const sde::KeyStore& keystore,
                          const sde::PublicParams& params);

}  // namespace cipherpdp::authz
