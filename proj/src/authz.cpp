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

#include "cipherpdp/authz.hpp"

#include <algorithm>
#include <set>

#include "cipherpdp/element.hpp"
#include "cipherpdp/error.hpp"

namespace cipherpdp::authz {

ClientConditionTree condition_enc(const ConditionTree& tree,
                                  const sde::ClientKeySet& key,
                                  const sde::PublicParams& params, Rng& rng) {
  validate_structure(tree);
  return tree.map([&](const std::string& leaf) {
    return sde::client_enc(canonical_element(ElementKind::context, leaf), key,
                           params, rng);
  });
}

ClientEncryptedTuple sat_enc(const SatTuple& tuple,
                             const sde::ClientKeySet& key,
                             const sde::PublicParams& params, Rng& rng) {
  return {{
      sde::client_enc(canonical_element(ElementKind::subject, tuple.subject),
                      key, params, rng),
      sde::client_enc(canonical_element(ElementKind::action, tuple.action),
                      key, params, rng),
      sde::client_enc(canonical_element(ElementKind::target, tuple.target),
                      key, params, rng),
  }};
}

ClientEncryptedPolicy policy_enc(const PolicySpec& policy,
                                 const sde::ClientKeySet& key,
                                 const sde::PublicParams& params, Rng& rng) {
  ClientEncryptedPolicy out{sat_enc(policy.tuple, key, params, rng), {}};
  if (policy.condition) {
    auto normalized = normalize_condition(*policy.condition);
    if (normalized) out.condition = condition_enc(*normalized, key, params, rng);
  }
  return out;
}

EncryptedRequestTuple sat_request(const SatTuple& tuple,
                                  const sde::ClientKeySet& key,
                                  const sde::PublicParams& params, Rng& rng) {
  return {key.user_id,
          {
              sde::client_td(
                  canonical_element(ElementKind::subject, tuple.subject), key,
                  params, rng),
              sde::client_td(
                  canonical_element(ElementKind::action, tuple.action), key,
                  params, rng),
              sde::client_td(
                  canonical_element(ElementKind::target, tuple.target), key,
                  params, rng),
          }};
}

EncryptedAttributeList attributes_request(const AttributeSet& attrs,
                                          const sde::ClientKeySet& key,
                                          const sde::PublicParams& params,
                                          Rng& rng) {
  EncryptedAttributeList out{key.user_id, {}};
  for (const auto& e : attrs.elements())
    out.items.push_back(sde::client_td(
        canonical_element(ElementKind::context, e), key, params, rng));
  return out;
}

EncryptedConditionTree condition_reenc(const ClientConditionTree& tree,
                                       const std::string& admin_id,
                                       const sde::KeyStore& keystore,
                                       const sde::PublicParams& params) {
  const auto& key = keystore.at(admin_id);
  return tree.map([&](const sde::ClientEncryptedElement& leaf) {
    return sde::server_reenc(leaf, key, params);
  });
}

ServerEncryptedTuple sat_reenc(const ClientEncryptedTuple& tuple,
                               const std::string& admin_id,
                               const sde::KeyStore& keystore,
                               const sde::PublicParams& params) {
  const auto& key = keystore.at(admin_id);
  ServerEncryptedTuple out;
  for (std::size_t i = 0; i < 3; ++i)
    out.elements[i] = sde::server_reenc(tuple.elements[i], key, params);
  return out;
}

EncryptedPolicy policy_reenc(const ClientEncryptedPolicy& policy,
                             const std::string& admin_id,
                             const sde::KeyStore& keystore,
                             const sde::PublicParams& params) {
  EncryptedPolicy out;
  out.tuple = sat_reenc(policy.tuple, admin_id, keystore, params);
  if (policy.condition)
    out.condition =
        condition_reenc(*policy.condition, admin_id, keystore, params);
  return out;
}

std::vector<std::string> sat_search(const EncryptedRequestTuple& request,
                                    std::span<const EncryptedPolicy> store,
                                    const sde::KeyStore& keystore,
                                    const sde::PublicParams& params) {
  const auto& key = keystore.at(request.requester_id);
  std::array<sde::ServerTrapdoor, 3> td;
  for (std::size_t i = 0; i < 3; ++i)
    td[i] = sde::server_td(request.trapdoors[i], key, params);

  std::vector<std::string> hits;
  for (const auto& policy : store) {
    bool all = true;
    for (std::size_t i = 0; i < 3 && all; ++i)
      all = sde::match(policy.tuple.elements[i], td[i], params);
    if (all) hits.push_back(policy.policy_id);
  }
  return hits;
}

std::vector<sde::ServerTrapdoor> server_trapdoors(
    const EncryptedAttributeList& attrs, const sde::KeyStore& keystore,
    const sde::PublicParams& params) {
  const auto& key = keystore.at(attrs.source_id);
  std::vector<sde::ServerTrapdoor> out;
  out.reserve(attrs.items.size());
  for (const auto& td : attrs.items)
    out.push_back(sde::server_td(td, key, params));
  return out;
}

bool condition_holds(const std::optional<EncryptedConditionTree>& condition,
                     std::span<const sde::ServerTrapdoor> attributes,
                     const sde::PublicParams& params) {
  if (!condition) return true;
  return evaluate_tree(*condition, [&](const sde::ServerEncryptedElement& c) {
    return std::any_of(attributes.begin(), attributes.end(),
                       [&](const auto& t) { return sde::match(c, t, params); });
  });
}

bool condition_evaluation(const EncryptedAttributeList& attrs,
                          const EncryptedPolicy& policy,
                          const sde::KeyStore& keystore,
                          const sde::PublicParams& params) {
  auto tds = server_trapdoors(attrs, keystore, params);
  return condition_holds(policy.condition, tds, params);
}

bool user_revocation(const std::string& user_id, sde::KeyStore& keystore) {
  return keystore.erase(user_id);
}

std::string PolicyStore::add(EncryptedPolicy policy) {
  policy.policy_id = "policy-" + std::to_string(next_id_++);
  policies_.push_back(std::move(policy));
  return policies_.back().policy_id;
}

bool PolicyStore::remove(const std::string& policy_id) {
  auto it = std::find_if(policies_.begin(), policies_.end(),
                         [&](const auto& p) { return p.policy_id == policy_id; });
  if (it == policies_.end()) return false;
  policies_.erase(it);
  return true;
}

PolicyStore PolicyStore::restore(std::vector<EncryptedPolicy> policies,
                                 std::uint64_t next_id) {
  std::set<std::string> seen;
  for (const auto& p : policies) {
    if (!seen.insert(p.policy_id).second)
      fail(Errc::parse_error, "duplicate policy id " + p.policy_id);
  }
  PolicyStore out;
  out.policies_ = std::move(policies);
  out.next_id_ = next_id;
  return out;
}

Decision evaluate_request(const EncryptedRequestTuple& request,
                          const EncryptedAttributeList* attrs,
                          const PolicyStore& store,
                          const sde::KeyStore& keystore,
                          const sde::PublicParams& params) {
  Decision d;
  d.matched = sat_search(request, store.policies(), keystore, params);
  if (d.matched.empty()) {
    d.reason = "no-matching-policy";
    return d;
  }
  std::vector<sde::ServerTrapdoor> tds;
  if (attrs) tds = server_trapdoors(*attrs, keystore, params);
  for (const auto& policy : store.policies()) {
    if (std::find(d.matched.begin(), d.matched.end(), policy.policy_id) ==
        d.matched.end())
      continue;
    if (condition_holds(policy.condition, tds, params)) {
      d.permit = true;
      d.reason = "permit";
      return d;
    }
  }
  d.reason = "condition-not-satisfied";
  return d;
}

}  // namespace cipherpdp::authz
