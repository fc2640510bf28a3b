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

#include "cipherpdp/serialize.hpp"

namespace cipherpdp {

namespace {

BigInt big(const Json& j, const char* key) {
  return bigint_from_hex(j.at(key).get<std::string>());
}

Bytes raw(const Json& j, const char* key) {
  return bytes_from_hex(j.at(key).get<std::string>());
}

std::string str(const Json& j, const char* key) {
  return j.at(key).get<std::string>();
}

}  // namespace

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::parse_error, std::string("invalid JSON: ") + e.what());
  }
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

void to_json(Json& j, const SatTuple& v) {
  j = Json{{"subject", v.subject}, {"action", v.action}, {"target", v.target}};
}

void from_json(const Json& j, SatTuple& v) {
  v = {str(j, "subject"), str(j, "action"), str(j, "target")};
}

void to_json(Json& j, const AttributeSet& v) {
  Json numerics = Json::object();
  for (const auto& [name, n] : v.numerics())
    numerics[name] = Json{{"value", n.value}, {"bits", n.bits}};
  j = Json{{"strings", v.strings()}, {"numerics", numerics}};
}

void from_json(const Json& j, AttributeSet& v) {
  v = AttributeSet{};
  for (const auto& [name, value] : j.at("strings").items())
    v.add_string(name, value.get<std::string>());
  for (const auto& [name, n] : j.at("numerics").items())
    v.add_numeric(name, n.at("value").get<std::uint64_t>(),
                  n.at("bits").get<unsigned>());
}

namespace sde {

void to_json(Json& j, const PublicParams& v) {
  j = Json{{"p", to_hex(v.p)},       {"q", to_hex(v.q)},
           {"g", to_hex(v.g)},       {"h", to_hex(v.h)},
           {"hash", v.hash_id},      {"prf", v.prf_id},
           {"security_bits", v.security_bits}};
}

void from_json(const Json& j, PublicParams& v) {
  v.p = big(j, "p");
  v.q = big(j, "q");
  v.g = big(j, "g");
  v.h = big(j, "h");
  v.hash_id = str(j, "hash");
  v.prf_id = str(j, "prf");
  v.security_bits = j.at("security_bits").get<unsigned>();
}

void to_json(Json& j, const MasterSecretKey& v) {
  j = Json{{"x", to_hex(v.x)}, {"s", bytes_to_hex(v.s)}};
}

void from_json(const Json& j, MasterSecretKey& v) {
  v = {big(j, "x"), raw(j, "s")};
}

void to_json(Json& j, const ClientKeySet& v) {
  j = Json{{"user", v.user_id}, {"x1", to_hex(v.x1)}, {"s", bytes_to_hex(v.s)}};
}

void from_json(const Json& j, ClientKeySet& v) {
  v = {str(j, "user"), big(j, "x1"), raw(j, "s")};
}

void to_json(Json& j, const ServerKeySet& v) {
  j = Json{{"user", v.user_id}, {"x2", to_hex(v.x2)}};
}

void from_json(const Json& j, ServerKeySet& v) {
  v = {str(j, "user"), big(j, "x2")};
}

void to_json(Json& j, const KeyStore& v) {
  j = Json::array();
  for (const auto& [id, key] : v.entries()) j.push_back(key);
}

void from_json(const Json& j, KeyStore& v) {
  v = KeyStore{};
  for (const auto& e : j)
    if (!v.insert(e.get<ServerKeySet>()))
      fail(Errc::parse_error, "duplicate key for " + str(e, "user"));
}

void to_json(Json& j, const ClientEncryptedElement& v) {
  j = Json{{"c1_hat", to_hex(v.c1_hat)},
           {"c2_hat", to_hex(v.c2_hat)},
           {"c3_hat", bytes_to_hex(v.c3_hat)}};
}

void from_json(const Json& j, ClientEncryptedElement& v) {
  v = {big(j, "c1_hat"), big(j, "c2_hat"), raw(j, "c3_hat")};
}

void to_json(Json& j, const ServerEncryptedElement& v) {
  j = Json{{"c1", to_hex(v.c1)}, {"c2", bytes_to_hex(v.c2)}};
}

void from_json(const Json& j, ServerEncryptedElement& v) {
  v = {big(j, "c1"), raw(j, "c2")};
}

void to_json(Json& j, const ClientTrapdoor& v) {
  j = Json{{"t1", to_hex(v.t1)}, {"t2", to_hex(v.t2)}};
}

void from_json(const Json& j, ClientTrapdoor& v) {
  v = {big(j, "t1"), big(j, "t2")};
}

void to_json(Json& j, const ServerTrapdoor& v) {
  j = Json{{"t", to_hex(v.t)}};
}

void from_json(const Json& j, ServerTrapdoor& v) { v = {big(j, "t")}; }

}  // namespace sde

namespace authz {

void to_json(Json& j, const ClientEncryptedTuple& v) { j = v.elements; }
void from_json(const Json& j, ClientEncryptedTuple& v) {
  v.elements = j.get<std::array<sde::ClientEncryptedElement, 3>>();
}

void to_json(Json& j, const ServerEncryptedTuple& v) { j = v.elements; }
void from_json(const Json& j, ServerEncryptedTuple& v) {
  v.elements = j.get<std::array<sde::ServerEncryptedElement, 3>>();
}

void to_json(Json& j, const ClientEncryptedPolicy& v) {
  j = Json{{"tuple", v.tuple}};
  detail::put_optional(j, "condition", v.condition);
}

void from_json(const Json& j, ClientEncryptedPolicy& v) {
  v.tuple = j.at("tuple").get<ClientEncryptedTuple>();
  detail::get_optional(j, "condition", v.condition);
}

void to_json(Json& j, const EncryptedPolicy& v) {
  j = Json{{"id", v.policy_id}, {"tuple", v.tuple}};
  detail::put_optional(j, "condition", v.condition);
}

void from_json(const Json& j, EncryptedPolicy& v) {
  v.policy_id = str(j, "id");
  v.tuple = j.at("tuple").get<ServerEncryptedTuple>();
  detail::get_optional(j, "condition", v.condition);
}

void to_json(Json& j, const EncryptedRequestTuple& v) {
  j = Json{{"requester", v.requester_id}, {"trapdoors", v.trapdoors}};
}

void from_json(const Json& j, EncryptedRequestTuple& v) {
  v.requester_id = str(j, "requester");
  v.trapdoors = j.at("trapdoors").get<std::array<sde::ClientTrapdoor, 3>>();
}

void to_json(Json& j, const EncryptedAttributeList& v) {
  j = Json{{"source", v.source_id}, {"items", v.items}};
}

void from_json(const Json& j, EncryptedAttributeList& v) {
  v.source_id = str(j, "source");
  v.items = j.at("items").get<std::vector<sde::ClientTrapdoor>>();
}

void to_json(Json& j, const PolicyStore& v) {
  j = Json{{"next_id", v.next_id()},
           {"policies", std::vector<EncryptedPolicy>(v.policies().begin(),
                                                     v.policies().end())}};
}

void from_json(const Json& j, PolicyStore& v) {
  v = PolicyStore::restore(j.at("policies").get<std::vector<EncryptedPolicy>>(),
                           j.at("next_id").get<std::uint64_t>());
}

}  // namespace authz

namespace rbac {

void to_json(Json& j, const ClientRoleAssignment& v) {
  j = Json{{"requester", v.requester_id}, {"roles", v.roles}};
  detail::put_optional(j, "condition", v.activation_condition);
}

void from_json(const Json& j, ClientRoleAssignment& v) {
  v.requester_id = str(j, "requester");
  v.roles = j.at("roles").get<std::vector<sde::ClientEncryptedElement>>();
  detail::get_optional(j, "condition", v.activation_condition);
}

void to_json(Json& j, const RoleAssignment& v) {
  j = Json{{"id", v.id}, {"requester", v.requester_id}, {"roles", v.roles}};
  detail::put_optional(j, "condition", v.activation_condition);
}

void from_json(const Json& j, RoleAssignment& v) {
  v.id = str(j, "id");
  v.requester_id = str(j, "requester");
  v.roles = j.at("roles").get<std::vector<sde::ServerEncryptedElement>>();
  detail::get_optional(j, "condition", v.activation_condition);
}

void to_json(Json& j, const ClientPermission& v) {
  j = Json{{"action", v.action}, {"target", v.target}};
}

void from_json(const Json& j, ClientPermission& v) {
  v.action = j.at("action").get<sde::ClientEncryptedElement>();
  v.target = j.at("target").get<sde::ClientEncryptedElement>();
}

void to_json(Json& j, const Permission& v) {
  j = Json{{"action", v.action}, {"target", v.target}};
}

void from_json(const Json& j, Permission& v) {
  v.action = j.at("action").get<sde::ServerEncryptedElement>();
  v.target = j.at("target").get<sde::ServerEncryptedElement>();
}

void to_json(Json& j, const ClientPermissionAssignment& v) {
  j = Json{{"role", v.role}, {"permissions", v.permissions}};
  detail::put_optional(j, "condition", v.grant_condition);
}

void from_json(const Json& j, ClientPermissionAssignment& v) {
  v.role = j.at("role").get<sde::ClientEncryptedElement>();
  v.permissions = j.at("permissions").get<std::vector<ClientPermission>>();
  detail::get_optional(j, "condition", v.grant_condition);
}

void to_json(Json& j, const PermissionAssignment& v) {
  j = Json{{"id", v.id}, {"role", v.role}, {"permissions", v.permissions}};
  detail::put_optional(j, "condition", v.grant_condition);
}

void from_json(const Json& j, PermissionAssignment& v) {
  v.id = str(j, "id");
  v.role = j.at("role").get<sde::ServerEncryptedElement>();
  v.permissions = j.at("permissions").get<std::vector<Permission>>();
  detail::get_optional(j, "condition", v.grant_condition);
}

void to_json(Json& j, const ClientHierarchyNode& v) {
  j = Json{{"cipher", v.cipher}, {"trapdoor", v.trapdoor}};
}

void from_json(const Json& j, ClientHierarchyNode& v) {
  v.cipher = j.at("cipher").get<sde::ClientEncryptedElement>();
  v.trapdoor = j.at("trapdoor").get<sde::ClientTrapdoor>();
}

void to_json(Json& j, const HierarchyNode& v) {
  j = Json{{"cipher", v.cipher}, {"trapdoor", v.trapdoor}};
}

void from_json(const Json& j, HierarchyNode& v) {
  v.cipher = j.at("cipher").get<sde::ServerEncryptedElement>();
  v.trapdoor = j.at("trapdoor").get<sde::ServerTrapdoor>();
}

void to_json(Json& j, const ClientRoleHierarchy& v) {
  j = Json{{"nodes", v.nodes}, {"edges", v.edges}};
}

void from_json(const Json& j, ClientRoleHierarchy& v) {
  v.nodes = j.at("nodes").get<std::vector<ClientHierarchyNode>>();
  v.edges = j.at("edges").get<std::vector<Edge>>();
}

void to_json(Json& j, const RoleHierarchyGraph& v) {
  j = Json{{"nodes", v.nodes}, {"edges", v.edges}};
}

void from_json(const Json& j, RoleHierarchyGraph& v) {
  v.nodes = j.at("nodes").get<std::vector<HierarchyNode>>();
  v.edges = j.at("edges").get<std::vector<Edge>>();
  try {
    validate_edges(v.nodes.size(), v.edges);
  } catch (const Error& e) {
    fail(Errc::parse_error, e.what());
  }
}

void to_json(Json& j, const ActiveRole& v) {
  j = Json{{"trapdoor", v.trapdoor}, {"cipher", v.cipher}};
}

void from_json(const Json& j, ActiveRole& v) {
  v.trapdoor = j.at("trapdoor").get<sde::ServerTrapdoor>();
  v.cipher = j.at("cipher").get<sde::ServerEncryptedElement>();
}

void to_json(Json& j, const ActivationRequest& v) {
  j = Json{{"requester", v.requester_id}, {"role", v.role}};
  detail::put_optional(j, "attributes", v.attributes);
}

void from_json(const Json& j, ActivationRequest& v) {
  v.requester_id = str(j, "requester");
  v.role = j.at("role").get<sde::ClientTrapdoor>();
  detail::get_optional(j, "attributes", v.attributes);
}

void to_json(Json& j, const AccessRequest& v) {
  j = Json{{"requester", v.requester_id},
           {"role", v.role},
           {"action", v.action},
           {"target", v.target}};
  detail::put_optional(j, "attributes", v.attributes);
}

void from_json(const Json& j, AccessRequest& v) {
  v.requester_id = str(j, "requester");
  v.role = j.at("role").get<sde::ClientTrapdoor>();
  v.action = j.at("action").get<sde::ClientTrapdoor>();
  v.target = j.at("target").get<sde::ClientTrapdoor>();
  detail::get_optional(j, "attributes", v.attributes);
}

void to_json(Json& j, const RoleGraph& v) {
  j = Json{{"roles", v.roles}, {"extends", v.extends}};
}

void from_json(const Json& j, RoleGraph& v) {
  v.roles = j.at("roles").get<std::vector<std::string>>();
  v.extends =
      j.at("extends").get<std::vector<std::pair<std::string, std::string>>>();
}

}  // namespace rbac

namespace egrant {

namespace {

ConstraintKind kind_of(const Json& j) {
  auto kind = parse_constraint_kind(str(j, "kind"));
  if (!kind) fail(Errc::parse_error, "unknown constraint kind");
  return *kind;
}

}  // namespace

void to_json(Json& j, const LabeledValue& v) {
  j = Json{{"label", v.label}, {"value", v.value}};
}

void from_json(const Json& j, LabeledValue& v) {
  v = {str(j, "label"), str(j, "value")};
}

void to_json(Json& j, const ConstraintSpec& v) {
  j = Json{{"kind", to_string(v.kind)},
           {"tree", v.tree},
           {"bind_instance", v.bind_instance},
           {"deny_exact_repeat", v.deny_exact_repeat}};
}

void from_json(const Json& j, ConstraintSpec& v) {
  v.kind = kind_of(j);
  v.tree = j.at("tree").get<CleartextConstraintTree>();
  v.bind_instance = j.value("bind_instance", true);
  v.deny_exact_repeat = j.value("deny_exact_repeat", false);
}

void to_json(Json& j, const ClientConstraintLeaf& v) {
  j = Json{{"label", v.label}, {"cipher", v.cipher}, {"trapdoor", v.trapdoor}};
}

void from_json(const Json& j, ClientConstraintLeaf& v) {
  v.label = str(j, "label");
  v.cipher = j.at("cipher").get<sde::ClientEncryptedElement>();
  v.trapdoor = j.at("trapdoor").get<sde::ClientTrapdoor>();
}

void to_json(Json& j, const ConstraintLeaf& v) {
  j = Json{{"label", v.label}, {"cipher", v.cipher}, {"trapdoor", v.trapdoor}};
}

void from_json(const Json& j, ConstraintLeaf& v) {
  v.label = str(j, "label");
  v.cipher = j.at("cipher").get<sde::ServerEncryptedElement>();
  v.trapdoor = j.at("trapdoor").get<sde::ServerTrapdoor>();
}

void to_json(Json& j, const ClientConstraint& v) {
  j = Json{{"kind", to_string(v.kind)},
           {"tree", v.tree},
           {"bind_instance", v.bind_instance},
           {"deny_exact_repeat", v.deny_exact_repeat}};
}

void from_json(const Json& j, ClientConstraint& v) {
  v.kind = kind_of(j);
  v.tree = j.at("tree").get<TreeNode<ClientConstraintLeaf>>();
  v.bind_instance = j.at("bind_instance").get<bool>();
  v.deny_exact_repeat = j.at("deny_exact_repeat").get<bool>();
}

void to_json(Json& j, const ConstraintTree& v) {
  j = Json{{"id", v.constraint_id},
           {"kind", to_string(v.kind)},
           {"tree", v.tree},
           {"bind_instance", v.bind_instance},
           {"deny_exact_repeat", v.deny_exact_repeat}};
}

void from_json(const Json& j, ConstraintTree& v) {
  v.constraint_id = str(j, "id");
  v.kind = kind_of(j);
  v.tree = j.at("tree").get<TreeNode<ConstraintLeaf>>();
  v.bind_instance = j.at("bind_instance").get<bool>();
  v.deny_exact_repeat = j.at("deny_exact_repeat").get<bool>();
}

void to_json(Json& j, const RequestElement& v) {
  j = Json{{"label", v.label}, {"trapdoor", v.trapdoor}, {"cipher", v.cipher}};
}

void from_json(const Json& j, RequestElement& v) {
  v.label = str(j, "label");
  v.trapdoor = j.at("trapdoor").get<sde::ClientTrapdoor>();
  v.cipher = j.at("cipher").get<sde::ClientEncryptedElement>();
}

void to_json(Json& j, const EgrantRequest& v) {
  j = Json{{"requester", v.requester_id}, {"elements", v.elements}};
}

void from_json(const Json& j, EgrantRequest& v) {
  v.requester_id = str(j, "requester");
  v.elements = j.at("elements").get<std::vector<RequestElement>>();
}

void to_json(Json& j, const LabeledCipher& v) {
  j = Json{{"label", v.label}, {"cipher", v.cipher}};
}

void from_json(const Json& j, LabeledCipher& v) {
  v.label = str(j, "label");
  v.cipher = j.at("cipher").get<sde::ServerEncryptedElement>();
}

void to_json(Json& j, const SessionRecord& v) { j = v.elements; }

void from_json(const Json& j, SessionRecord& v) {
  v.elements = j.get<std::vector<LabeledCipher>>();
}

void to_json(Json& j, const ConstraintRequest& v) {
  j = Json{{"requester", v.requester_id}, {"role", v.role},
           {"action", v.action},          {"objtype", v.objtype},
           {"instance", v.instance},      {"domains", v.domains},
           {"context", v.context}};
}

void from_json(const Json& j, ConstraintRequest& v) {
  v.requester_id = j.value("requester", std::string{});
  v.role = str(j, "role");
  v.action = str(j, "action");
  v.objtype = str(j, "objtype");
  v.instance = str(j, "instance");
  v.domains = j.value("domains", std::vector<std::string>{});
  v.context = j.contains("context") ? j.at("context").get<AttributeSet>()
                                    : AttributeSet{};
}

}  // namespace egrant

}  // namespace cipherpdp
