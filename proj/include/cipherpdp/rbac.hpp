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

// Encrypted RBAC: role assignments, permission assignments and a role
// hierarchy stored as ciphertexts; a per-requester session of active roles;
// activation and access decisions computed by matching server trapdoors.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cipherpdp/authz.hpp"
#include "cipherpdp/counters.hpp"

namespace cipherpdp::rbac {

using authz::ClientConditionTree;
using authz::EncryptedAttributeList;
using authz::EncryptedConditionTree;

struct ClientRoleAssignment {
  std::string requester_id;
  std::vector<sde::ClientEncryptedElement> roles;
  std::optional<ClientConditionTree> activation_condition;
};

struct RoleAssignment {
  std::string id;
  std::string requester_id;  // cleartext: the server indexes by it
  std::vector<sde::ServerEncryptedElement> roles;
  std::optional<EncryptedConditionTree> activation_condition;

  bool operator==(const RoleAssignment&) const = default;
};

struct ClientPermission {
  sde::ClientEncryptedElement action;
  sde::ClientEncryptedElement target;
};

struct Permission {
  sde::ServerEncryptedElement action;
  sde::ServerEncryptedElement target;

  bool operator==(const Permission&) const = default;
};

struct ClientPermissionAssignment {
  sde::ClientEncryptedElement role;
  std::vector<ClientPermission> permissions;
  std::optional<ClientConditionTree> grant_condition;
};

struct PermissionAssignment {
  std::string id;
  sde::ServerEncryptedElement role;
  std::vector<Permission> permissions;
  std::optional<EncryptedConditionTree> grant_condition;

  bool operator==(const PermissionAssignment&) const = default;
};

// Cleartext hierarchy as edited by an admin: (derived, base) pairs, where
// the derived role inherits every permission of the base role.
struct RoleGraph {
  std::vector<std::string> roles;
  std::vector<std::pair<std::string, std::string>> extends;
};

// Throws Error(invalid_hierarchy) on cycles, unknown or duplicate roles.
void validate_graph(const RoleGraph& graph);

struct ClientHierarchyNode {
  sde::ClientEncryptedElement cipher;
  sde::ClientTrapdoor trapdoor;
};

struct HierarchyNode {
  sde::ServerEncryptedElement cipher;
  sde::ServerTrapdoor trapdoor;

  bool operator==(const HierarchyNode&) const = default;
};

using Edge = std::pair<std::size_t, std::size_t>;  // derived -> base

struct ClientRoleHierarchy {
  std::vector<ClientHierarchyNode> nodes;
  std::vector<Edge> edges;
};

struct RoleHierarchyGraph {
  std::vector<HierarchyNode> nodes;
  std::vector<Edge> edges;

  bool operator==(const RoleHierarchyGraph&) const = default;
};

// Throws Error(invalid_hierarchy) on out-of-range indices or cycles.
void validate_edges(std::size_t node_count, const std::vector<Edge>& edges);

struct ActiveRole {
  sde::ServerTrapdoor trapdoor;
  sde::ServerEncryptedElement cipher;

  bool operator==(const ActiveRole&) const = default;
};

struct ActivationRequest {
  std::string requester_id;
  sde::ClientTrapdoor role;
  std::optional<EncryptedAttributeList> attributes;
};

struct AccessRequest {
  std::string requester_id;
  sde::ClientTrapdoor role;
  sde::ClientTrapdoor action;
  sde::ClientTrapdoor target;
  std::optional<EncryptedAttributeList> attributes;
};

// --- client side -----------------------------------------------------------

ClientRoleAssignment role_assignment_enc(
    const std::vector<std::string>& roles, const std::string& requester_id,
    const std::optional<ConditionTree>& activation_condition,
    const sde::ClientKeySet& admin, const sde::PublicParams& params, Rng& rng);

ClientPermissionAssignment permission_assignment_enc(
    const std::string& role,
    const std::vector<std::pair<std::string, std::string>>& permissions,
    const std::optional<ConditionTree>& grant_condition,
    const sde::ClientKeySet& admin, const sde::PublicParams& params, Rng& rng);

ClientRoleHierarchy hierarchy_enc(const RoleGraph& graph,
                                  const sde::ClientKeySet& admin,
                                  const sde::PublicParams& params, Rng& rng);

ActivationRequest activation_request(const std::string& role,
                                     const sde::ClientKeySet& requester,
                                     const sde::PublicParams& params,
                                     Rng& rng);

AccessRequest access_request_enc(const std::string& role,
                                 const std::string& action,
                                 const std::string& target,
                                 const sde::ClientKeySet& requester,
                                 const sde::PublicParams& params, Rng& rng);

// --- server side -----------------------------------------------------------

RoleAssignment role_assignment_reenc(const ClientRoleAssignment& assignment,
                                     const std::string& admin_id,
                                     const sde::KeyStore& keystore,
                                     const sde::PublicParams& params);

PermissionAssignment permission_assignment_reenc(
    const ClientPermissionAssignment& assignment, const std::string& admin_id,
    const sde::KeyStore& keystore, const sde::PublicParams& params);

RoleHierarchyGraph hierarchy_reenc(const ClientRoleHierarchy& graph,
                                   const std::string& admin_id,
                                   const sde::KeyStore& keystore,
                                   const sde::PublicParams& params);

using Sessions = std::map<std::string, std::vector<ActiveRole>>;

// Role, permission and hierarchy repositories plus the Active Roles
// session. Ids are "ra-<n>" and "pa-<n>".
class RbacStore {
 public:
  std::string add_role_assignment(RoleAssignment assignment);
  std::string add_permission_assignment(PermissionAssignment assignment);
  bool remove_assignment(const std::string& id);
  void set_hierarchy(RoleHierarchyGraph graph);

  const std::vector<RoleAssignment>& role_assignments() const {
    return role_assignments_;
  }
  const std::vector<PermissionAssignment>& permission_assignments() const {
    return permission_assignments_;
  }
  const std::optional<RoleHierarchyGraph>& hierarchy() const {
    return hierarchy_;
  }
  const Sessions& sessions() const { return sessions_; }
  Sessions& sessions() { return sessions_; }
  std::uint64_t next_id() const { return next_id_; }

  static RbacStore restore(std::vector<RoleAssignment> roles,
                           std::vector<PermissionAssignment> permissions,
                           std::optional<RoleHierarchyGraph> hierarchy,
                           Sessions sessions, std::uint64_t next_id);

  bool operator==(const RbacStore&) const = default;

 private:
  std::vector<RoleAssignment> role_assignments_;
  std::vector<PermissionAssignment> permission_assignments_;
  std::optional<RoleHierarchyGraph> hierarchy_;
  Sessions sessions_;
  std::uint64_t next_id_ = 1;
};

// Match counts per evaluation phase.
struct AccessTrace {
  OpCounts session;      // active-role lookup
  OpCounts permissions;  // role lookup and (action, target) search
  OpCounts hierarchy;    // locating the role node in the graph
  std::size_t base_roles_probed = 0;
  bool via_hierarchy = false;
};

// Appends (trapdoor, cipher) to the requester's session when the role is
// assigned and its activation condition holds. An already-active role is
// granted without a second entry.
bool activate_role(const ActivationRequest& request, RbacStore& store,
                   const sde::KeyStore& keystore,
                   const sde::PublicParams& params);

// Removes every session entry for the role; false when none was active.
bool deactivate_role(const ActivationRequest& request, RbacStore& store,
                     const sde::KeyStore& keystore,
                     const sde::PublicParams& params);

// Never mutates the session. The requested role must be active; the
// permission is searched under the role itself and then, breadth first,
// under every base role reachable in the hierarchy.
bool access_request(const AccessRequest& request, const RbacStore& store,
                    const sde::KeyStore& keystore,
                    const sde::PublicParams& params,
                    AccessTrace* trace = nullptr, bool use_hierarchy = true);

}  // namespace cipherpdp::rbac
