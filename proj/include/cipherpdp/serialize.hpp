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

// JSON forms of every persisted and transmitted type. Integers are
// lowercase hex without leading zeros, byte strings lowercase hex, objects
// have sorted keys; dumping a decoded value reproduces the input bytes.

#include <optional>
#include <string>

#include "cipherpdp/authz.hpp"
#include "cipherpdp/constraints.hpp"
#include "cipherpdp/error.hpp"
#include "cipherpdp/rbac.hpp"
#include "cipherpdp/sde.hpp"
#include "json.hpp"

namespace cipherpdp {

using Json = nlohmann::json;

// Decodes `j` as T; any structural problem becomes Error(parse_error).
template <class T>
T decode(const Json& j, std::string_view what = "document") {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::parse_error, "malformed " + std::string(what) + ": " + e.what());
  }
}

// Parses text; Error(parse_error) on invalid JSON.
Json parse_json(std::string_view text);

// Stable textual form used for files and the wire.
std::string dump_json(const Json& j);

namespace detail {

template <class T>
void put_optional(Json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

template <class T>
void get_optional(const Json& j, const char* key, std::optional<T>& v) {
  if (j.contains(key))
    v = j.at(key).get<T>();
  else
    v.reset();
}

}  // namespace detail

template <class Leaf>
void to_json(Json& j, const TreeNode<Leaf>& node) {
  using Node = TreeNode<Leaf>;
  switch (node.kind) {
    case Node::Kind::constant:
      j = Json{{"const", node.constant}};
      return;
    case Node::Kind::leaf:
      j = Json{{"leaf", node.leaf}};
      return;
    case Node::Kind::gate:
      j = Json{{"gate", to_string(node.gate)}, {"children", node.children}};
      if (node.gate == Gate::threshold) j["k"] = node.k;
      return;
  }
}

template <class Leaf>
void from_json(const Json& j, TreeNode<Leaf>& node) {
  using Node = TreeNode<Leaf>;
  if (j.contains("const")) {
    node = Node::make_constant(j.at("const").get<bool>());
  } else if (j.contains("leaf")) {
    node = Node::make_leaf(j.at("leaf").get<Leaf>());
  } else {
    auto gate = parse_gate(j.at("gate").get<std::string>());
    if (!gate) fail(Errc::parse_error, "unknown gate");
    std::size_t k = gate == Gate::threshold ? j.at("k").get<std::size_t>() : 0;
    node = Node::make_gate(*gate, j.at("children").get<std::vector<Node>>(), k);
  }
  try {
    validate_structure(node);
  } catch (const Error& e) {
    fail(Errc::parse_error, e.what());
  }
}

void to_json(Json& j, const SatTuple& v);
void from_json(const Json& j, SatTuple& v);
void to_json(Json& j, const AttributeSet& v);
void from_json(const Json& j, AttributeSet& v);

namespace sde {
void to_json(Json& j, const PublicParams& v);
void from_json(const Json& j, PublicParams& v);
void to_json(Json& j, const MasterSecretKey& v);
void from_json(const Json& j, MasterSecretKey& v);
void to_json(Json& j, const ClientKeySet& v);
void from_json(const Json& j, ClientKeySet& v);
void to_json(Json& j, const ServerKeySet& v);
void from_json(const Json& j, ServerKeySet& v);
void to_json(Json& j, const KeyStore& v);
void from_json(const Json& j, KeyStore& v);
void to_json(Json& j, const ClientEncryptedElement& v);
void from_json(const Json& j, ClientEncryptedElement& v);
void to_json(Json& j, const ServerEncryptedElement& v);
void from_json(const Json& j, ServerEncryptedElement& v);
void to_json(Json& j, const ClientTrapdoor& v);
void from_json(const Json& j, ClientTrapdoor& v);
void to_json(Json& j, const ServerTrapdoor& v);
void from_json(const Json& j, ServerTrapdoor& v);
}  // namespace sde

namespace authz {
void to_json(Json& j, const ClientEncryptedTuple& v);
void from_json(const Json& j, ClientEncryptedTuple& v);
void to_json(Json& j, const ServerEncryptedTuple& v);
void from_json(const Json& j, ServerEncryptedTuple& v);
void to_json(Json& j, const ClientEncryptedPolicy& v);
void from_json(const Json& j, ClientEncryptedPolicy& v);
void to_json(Json& j, const EncryptedPolicy& v);
void from_json(const Json& j, EncryptedPolicy& v);
void to_json(Json& j, const EncryptedRequestTuple& v);
void from_json(const Json& j, EncryptedRequestTuple& v);
void to_json(Json& j, const EncryptedAttributeList& v);
void from_json(const Json& j, EncryptedAttributeList& v);
void to_json(Json& j, const PolicyStore& v);
void from_json(const Json& j, PolicyStore& v);
}  // namespace authz

namespace rbac {
void to_json(Json& j, const ClientRoleAssignment& v);
void from_json(const Json& j, ClientRoleAssignment& v);
void to_json(Json& j, const RoleAssignment& v);
void from_json(const Json& j, RoleAssignment& v);
void to_json(Json& j, const ClientPermission& v);
void from_json(const Json& j, ClientPermission& v);
void to_json(Json& j, const Permission& v);
void from_json(const Json& j, Permission& v);
void to_json(Json& j, const ClientPermissionAssignment& v);
void from_json(const Json& j, ClientPermissionAssignment& v);
void to_json(Json& j, const PermissionAssignment& v);
void from_json(const Json& j, PermissionAssignment& v);
void to_json(Json& j, const ClientHierarchyNode& v);
void from_json(const Json& j, ClientHierarchyNode& v);
void to_json(Json& j, const HierarchyNode& v);
void from_json(const Json& j, HierarchyNode& v);
void to_json(Json& j, const ClientRoleHierarchy& v);
void from_json(const Json& j, ClientRoleHierarchy& v);
void to_json(Json& j, const RoleHierarchyGraph& v);
void from_json(const Json& j, RoleHierarchyGraph& v);
void to_json(Json& j, const ActiveRole& v);
void from_json(const Json& j, ActiveRole& v);
void to_json(Json& j, const ActivationRequest& v);
void from_json(const Json& j, ActivationRequest& v);
void to_json(Json& j, const AccessRequest& v);
void from_json(const Json& j, AccessRequest& v);
void to_json(Json& j, const RoleGraph& v);
void from_json(const Json& j, RoleGraph& v);
}  // namespace rbac

namespace egrant {
void to_json(Json& j, const LabeledValue& v);
void from_json(const Json& j, LabeledValue& v);
void to_json(Json& j, const ConstraintSpec& v);
void from_json(const Json& j, ConstraintSpec& v);
void to_json(Json& j, const ClientConstraintLeaf& v);
void from_json(const Json& j, ClientConstraintLeaf& v);
void to_json(Json& j, const ConstraintLeaf& v);
void from_json(const Json& j, ConstraintLeaf& v);
void to_json(Json& j, const ClientConstraint& v);
void from_json(const Json& j, ClientConstraint& v);
void to_json(Json& j, const ConstraintTree& v);
void from_json(const Json& j, ConstraintTree& v);
void to_json(Json& j, const RequestElement& v);
void from_json(const Json& j, RequestElement& v);
void to_json(Json& j, const EgrantRequest& v);
void from_json(const Json& j, EgrantRequest& v);
void to_json(Json& j, const LabeledCipher& v);
void from_json(const Json& j, LabeledCipher& v);
void to_json(Json& j, const SessionRecord& v);
void from_json(const Json& j, SessionRecord& v);
void to_json(Json& j, const ConstraintRequest& v);
void from_json(const Json& j, ConstraintRequest& v);
}  // namespace egrant

}  // namespace cipherpdp
