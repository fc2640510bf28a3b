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

#include "cipherpdp/rbac.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "cipherpdp/element.hpp"
#include "cipherpdp/error.hpp"

namespace cipherpdp::rbac {

namespace {

std::string role_element(const std::string& role) {
  return canonical_element(ElementKind::role, role);
}

// Lazily converts the request's attribute trapdoors, once per decision.
class AttributeTrapdoors {
 public:
  AttributeTrapdoors(const std::optional<EncryptedAttributeList>& attrs,
                     const sde::KeyStore& keystore,
                     const sde::PublicParams& params)
      : attrs_(attrs), keystore_(keystore), params_(params) {
    if (attrs_) keystore_.at(attrs_->source_id);
  }

  bool holds(const std::optional<EncryptedConditionTree>& condition) {
    if (!condition) return true;
    if (!converted_ && attrs_) {
      tds_ = authz::server_trapdoors(*attrs_, keystore_, params_);
      converted_ = true;
    }
    return authz::condition_holds(condition, tds_, params_);
  }

 private:
  const std::optional<EncryptedAttributeList>& attrs_;
  const sde::KeyStore& keystore_;
  const sde::PublicParams& params_;
  std::vector<sde::ServerTrapdoor> tds_;
  bool converted_ = false;
};

}  // namespace

void validate_edges(std::size_t node_count, const std::vector<Edge>& edges) {
  std::vector<std::vector<std::size_t>> bases(node_count);
  for (const auto& [derived, base] : edges) {
    if (derived >= node_count || base >= node_count)
      fail(Errc::invalid_hierarchy, "edge endpoint out of range");
    if (derived == base) fail(Errc::invalid_hierarchy, "role extends itself");
    bases[derived].push_back(base);
  }
  // Kahn's algorithm; leftovers sit on a cycle.
  std::vector<std::size_t> indegree(node_count, 0);
  for (const auto& [derived, base] : edges) ++indegree[base];
  std::vector<std::size_t> ready;
  for (std::size_t i = 0; i < node_count; ++i)
    if (indegree[i] == 0) ready.push_back(i);
  std::size_t visited = 0;
  while (!ready.empty()) {
    std::size_t n = ready.back();
    ready.pop_back();
    ++visited;
    for (auto b : bases[n])
      if (--indegree[b] == 0) ready.push_back(b);
  }
  if (visited != node_count)
    fail(Errc::invalid_hierarchy, "role hierarchy contains a cycle");
}

void validate_graph(const RoleGraph& graph) {
  std::map<std::string, std::size_t> index;
  for (const auto& r : graph.roles) {
    if (r.empty()) fail(Errc::invalid_hierarchy, "empty role name");
    if (!index.emplace(r, index.size()).second)
      fail(Errc::invalid_hierarchy, "duplicate role '" + r + "'");
  }
  std::vector<Edge> edges;
  for (const auto& [derived, base] : graph.extends) {
    auto d = index.find(derived);
    auto b = index.find(base);
    if (d == index.end() || b == index.end())
      fail(Errc::invalid_hierarchy,
           "edge " + derived + " -> " + base + " names an unknown role");
    edges.emplace_back(d->second, b->second);
  }
  validate_edges(graph.roles.size(), edges);
}

ClientRoleAssignment role_assignment_enc(
    const std::vector<std::string>& roles, const std::string& requester_id,
    const std::optional<ConditionTree>& activation_condition,
    const sde::ClientKeySet& admin, const sde::PublicParams& params,
    Rng& rng) {
  if (requester_id.empty()) fail(Errc::invalid_argument, "empty requester id");
  ClientRoleAssignment out;
  out.requester_id = requester_id;
  for (const auto& r : roles)
    out.roles.push_back(sde::client_enc(role_element(r), admin, params, rng));
  if (activation_condition) {
    if (auto cond = normalize_condition(*activation_condition))
      out.activation_condition = authz::condition_enc(*cond, admin, params, rng);
  }
  return out;
}

ClientPermissionAssignment permission_assignment_enc(
    const std::string& role,
    const std::vector<std::pair<std::string, std::string>>& permissions,
    const std::optional<ConditionTree>& grant_condition,
    const sde::ClientKeySet& admin, const sde::PublicParams& params,
    Rng& rng) {
  ClientPermissionAssignment out;
  out.role = sde::client_enc(role_element(role), admin, params, rng);
  for (const auto& [action, target] : permissions) {
    out.permissions.push_back(
        {sde::client_enc(canonical_element(ElementKind::action, action), admin,
                         params, rng),
         sde::client_enc(canonical_element(ElementKind::target, target), admin,
                         params, rng)});
  }
  if (grant_condition) {
    if (auto cond = normalize_condition(*grant_condition))
      out.grant_condition = authz::condition_enc(*cond, admin, params, rng);
  }
  return out;
}

ClientRoleHierarchy hierarchy_enc(const RoleGraph& graph,
                                  const sde::ClientKeySet& admin,
                                  const sde::PublicParams& params, Rng& rng) {
  validate_graph(graph);
  ClientRoleHierarchy out;
  std::map<std::string, std::size_t> index;
  for (const auto& r : graph.roles) {
    index.emplace(r, out.nodes.size());
    out.nodes.push_back({sde::client_enc(role_element(r), admin, params, rng),
                         sde::client_td(role_element(r), admin, params, rng)});
  }
  for (const auto& [derived, base] : graph.extends)
    out.edges.emplace_back(index.at(derived), index.at(base));
  return out;
}

ActivationRequest activation_request(const std::string& role,
                                     const sde::ClientKeySet& requester,
                                     const sde::PublicParams& params,
                                     Rng& rng) {
  return {requester.user_id,
          sde::client_td(role_element(role), requester, params, rng),
          std::nullopt};
}

AccessRequest access_request_enc(const std::string& role,
                                 const std::string& action,
                                 const std::string& target,
                                 const sde::ClientKeySet& requester,
                                 const sde::PublicParams& params, Rng& rng) {
  AccessRequest out;
  out.requester_id = requester.user_id;
  out.role = sde::client_td(role_element(role), requester, params, rng);
  out.action = sde::client_td(canonical_element(ElementKind::action, action),
                              requester, params, rng);
  out.target = sde::client_td(canonical_element(ElementKind::target, target),
                              requester, params, rng);
  return out;
}

RoleAssignment role_assignment_reenc(const ClientRoleAssignment& assignment,
                                     const std::string& admin_id,
                                     const sde::KeyStore& keystore,
                                     const sde::PublicParams& params) {
  const auto& key = keystore.at(admin_id);
  RoleAssignment out;
  out.requester_id = assignment.requester_id;
  for (const auto& c : assignment.roles)
    out.roles.push_back(sde::server_reenc(c, key, params));
  if (assignment.activation_condition)
    out.activation_condition = authz::condition_reenc(
        *assignment.activation_condition, admin_id, keystore, params);
  return out;
}

PermissionAssignment permission_assignment_reenc(
    const ClientPermissionAssignment& assignment, const std::string& admin_id,
    const sde::KeyStore& keystore, const sde::PublicParams& params) {
  const auto& key = keystore.at(admin_id);
  PermissionAssignment out;
  out.role = sde::server_reenc(assignment.role, key, params);
  for (const auto& p : assignment.permissions)
    out.permissions.push_back({sde::server_reenc(p.action, key, params),
                               sde::server_reenc(p.target, key, params)});
  if (assignment.grant_condition)
    out.grant_condition = authz::condition_reenc(*assignment.grant_condition,
                                                 admin_id, keystore, params);
  return out;
}

RoleHierarchyGraph hierarchy_reenc(const ClientRoleHierarchy& graph,
                                   const std::string& admin_id,
                                   const sde::KeyStore& keystore,
                                   const sde::PublicParams& params) {
  validate_edges(graph.nodes.size(), graph.edges);
  const auto& key = keystore.at(admin_id);
  RoleHierarchyGraph out;
  for (const auto& n : graph.nodes)
    out.nodes.push_back({sde::server_reenc(n.cipher, key, params),
                         sde::server_td(n.trapdoor, key, params)});
  out.edges = graph.edges;
  return out;
}

std::string RbacStore::add_role_assignment(RoleAssignment assignment) {
  assignment.id = "ra-" + std::to_string(next_id_++);
  role_assignments_.push_back(std::move(assignment));
  return role_assignments_.back().id;
}

std::string RbacStore::add_permission_assignment(
    PermissionAssignment assignment) {
  assignment.id = "pa-" + std::to_string(next_id_++);
  permission_assignments_.push_back(std::move(assignment));
  return permission_assignments_.back().id;
}

bool RbacStore::remove_assignment(const std::string& id) {
  auto by_id = [&](const auto& a) { return a.id == id; };
  auto ra = std::find_if(role_assignments_.begin(), role_assignments_.end(),
                         by_id);
  if (ra != role_assignments_.end()) {
    role_assignments_.erase(ra);
    return true;
  }
  auto pa = std::find_if(permission_assignments_.begin(),
                         permission_assignments_.end(), by_id);
  if (pa != permission_assignments_.end()) {
    permission_assignments_.erase(pa);
    return true;
  }
  return false;
}

void RbacStore::set_hierarchy(RoleHierarchyGraph graph) {
  validate_edges(graph.nodes.size(), graph.edges);
  hierarchy_ = std::move(graph);
}

RbacStore RbacStore::restore(std::vector<RoleAssignment> roles,
                             std::vector<PermissionAssignment> permissions,
                             std::optional<RoleHierarchyGraph> hierarchy,
                             Sessions sessions, std::uint64_t next_id) {
  std::set<std::string> ids;
  for (const auto& r : roles)
    if (!ids.insert(r.id).second)
      fail(Errc::parse_error, "duplicate assignment id " + r.id);
  for (const auto& p : permissions)
    if (!ids.insert(p.id).second)
      fail(Errc::parse_error, "duplicate assignment id " + p.id);
  if (hierarchy) validate_edges(hierarchy->nodes.size(), hierarchy->edges);
  RbacStore out;
  out.role_assignments_ = std::move(roles);
  out.permission_assignments_ = std::move(permissions);
  out.hierarchy_ = std::move(hierarchy);
  out.sessions_ = std::move(sessions);
  out.next_id_ = next_id;
  return out;
}

bool activate_role(const ActivationRequest& request, RbacStore& store,
                   const sde::KeyStore& keystore,
                   const sde::PublicParams& params) {
  const auto& key = keystore.at(request.requester_id);
  AttributeTrapdoors attrs(request.attributes, keystore, params);
  sde::ServerTrapdoor td = sde::server_td(request.role, key, params);

  const sde::ServerEncryptedElement* granted = nullptr;
  for (const auto& ra : store.role_assignments()) {
    if (ra.requester_id != request.requester_id) continue;
    for (const auto& c : ra.roles) {
      if (!sde::match(c, td, params)) continue;
      if (attrs.holds(ra.activation_condition)) granted = &c;
      break;
    }
    if (granted) break;
  }
  if (!granted) return false;

  auto& session = store.sessions()[request.requester_id];
  bool active = std::any_of(session.begin(), session.end(), [&](const auto& e) {
    return sde::match(e.cipher, td, params);
  });
  if (!active) session.push_back({td, *granted});
  return true;
}

bool deactivate_role(const ActivationRequest& request, RbacStore& store,
                     const sde::KeyStore& keystore,
                     const sde::PublicParams& params) {
  const auto& key = keystore.at(request.requester_id);
  sde::ServerTrapdoor td = sde::server_td(request.role, key, params);
  auto it = store.sessions().find(request.requester_id);
  if (it == store.sessions().end()) return false;
  auto& session = it->second;
  auto removed = std::erase_if(session, [&](const auto& e) {
    return sde::match(e.cipher, td, params);
  });
  if (session.empty()) store.sessions().erase(it);
  return removed > 0;
}

bool access_request(const AccessRequest& request, const RbacStore& store,
                    const sde::KeyStore& keystore,
                    const sde::PublicParams& params, AccessTrace* trace,
                    bool use_hierarchy) {
  const auto& key = keystore.at(request.requester_id);
  AttributeTrapdoors attrs(request.attributes, keystore, params);
  AccessTrace local;
  AccessTrace& t = trace ? *trace : local;
  t = AccessTrace{};

  sde::ServerTrapdoor role_td = sde::server_td(request.role, key, params);
  sde::ServerTrapdoor action_td = sde::server_td(request.action, key, params);
  sde::ServerTrapdoor target_td = sde::server_td(request.target, key, params);

  {
    CountScope scope;
    bool active = false;
    auto it = store.sessions().find(request.requester_id);
    if (it != store.sessions().end()) {
      active = std::any_of(it->second.begin(), it->second.end(),
                           [&](const auto& e) {
                             return sde::match(e.cipher, role_td, params);
                           });
    }
    t.session = scope.elapsed();
    if (!active) return false;
  }

  auto permitted_under = [&](const sde::ServerTrapdoor& role) {
    CountScope scope;
    bool hit = false;
    for (const auto& pa : store.permission_assignments()) {
      if (!sde::match(pa.role, role, params)) continue;
      for (const auto& p : pa.permissions) {
        if (sde::match(p.action, action_td, params) &&
            sde::match(p.target, target_td, params) &&
            attrs.holds(pa.grant_condition)) {
          hit = true;
          break;
        }
      }
      if (hit) break;
    }
    OpCounts used = scope.elapsed();
    t.permissions.match += used.match;
    t.permissions.server_td += used.server_td;
    return hit;
  };

  if (permitted_under(role_td)) return true;

  const auto& graph = store.hierarchy();
  if (!use_hierarchy || !graph) return false;

  std::optional<std::size_t> start;
  {
    CountScope scope;
    for (std::size_t i = 0; i < graph->nodes.size(); ++i) {
      if (sde::match(graph->nodes[i].cipher, role_td, params)) {
        start = i;
        break;
      }
    }
    t.hierarchy = scope.elapsed();
  }
  if (!start) return false;

  std::vector<std::vector<std::size_t>> bases(graph->nodes.size());
  for (const auto& [derived, base] : graph->edges) bases[derived].push_back(base);

  std::vector<bool> seen(graph->nodes.size(), false);
  std::deque<std::size_t> queue{*start};
  seen[*start] = true;
  while (!queue.empty()) {
    std::size_t n = queue.front();
    queue.pop_front();
    for (auto b : bases[n]) {
      if (seen[b]) continue;
      seen[b] = true;
      ++t.base_roles_probed;
      if (permitted_under(graph->nodes[b].trapdoor)) {
        t.via_hierarchy = true;
        return true;
      }
      queue.push_back(b);
    }
  }
  return false;
}

}  // namespace cipherpdp::rbac
