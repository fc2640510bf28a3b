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

#include "cipherpdp/reference.hpp"

#include <algorithm>
#include <deque>

namespace cipherpdp::reference {

namespace {

bool leaf_holds(const std::string& leaf, const AttributeSet& attrs) {
  if (auto colon = leaf.find(':'); colon != std::string::npos &&
                                   leaf.find('=') == std::string::npos) {
    auto it = attrs.numerics().find(leaf.substr(0, colon));
    if (it == attrs.numerics().end()) return false;
    std::string_view pattern = std::string_view(leaf).substr(colon + 1);
    if (pattern.size() != it->second.bits) return false;
    for (std::size_t pos = 0; pos < pattern.size(); ++pos) {
      if (pattern[pos] == '*') continue;
      unsigned shift = it->second.bits - 1 - static_cast<unsigned>(pos);
      bool bit = (it->second.value >> shift) & 1u;
      return bit == (pattern[pos] == '1');
    }
    return false;
  }
  auto eq = leaf.find('=');
  if (eq == std::string::npos) return false;
  auto it = attrs.strings().find(leaf.substr(0, eq));
  return it != attrs.strings().end() && it->second == leaf.substr(eq + 1);
}

bool contains(const std::vector<egrant::LabeledValue>& record,
              const egrant::LabeledValue& v) {
  return std::find(record.begin(), record.end(), v) != record.end();
}

const std::string& value_of(const std::vector<egrant::LabeledValue>& record,
                            const std::string& label) {
  static const std::string none;
  for (const auto& v : record)
    if (v.label == label) return v.value;
  return none;
}

bool violates(const egrant::ConstraintSpec& c,
              const std::vector<egrant::LabeledValue>& request,
              const std::vector<std::vector<egrant::LabeledValue>>& records) {
  auto in_request = [&](const egrant::LabeledValue& v) {
    return contains(request, v);
  };
  if (!evaluate_tree(c.tree, in_request)) return false;

  if (c.kind == egrant::ConstraintKind::cw) {
    for (const auto& branch : c.tree.children) {
      if (evaluate_tree(branch, in_request)) continue;
      for (const auto& r : records) {
        auto in_record = [&](const egrant::LabeledValue& v) {
          return contains(r, v);
        };
        if (evaluate_tree(branch, in_record)) return true;
      }
    }
    return false;
  }

  const egrant::CleartextConstraintTree* group = [&] {
    for (const auto& ch : c.tree.children)
      if (ch.is_gate()) return &ch;
    return static_cast<const egrant::CleartextConstraintTree*>(nullptr);
  }();
  std::vector<egrant::LabeledValue> conflicting;
  for (const auto& m : group->children)
    if (c.deny_exact_repeat || !in_request(m.leaf))
      conflicting.push_back(m.leaf);
  for (const auto& r : records) {
    if (value_of(r, "objtype") != value_of(request, "objtype")) continue;
    if (c.bind_instance &&
        value_of(r, "instance") != value_of(request, "instance"))
      continue;
    bool conflict = std::any_of(conflicting.begin(), conflicting.end(),
                                [&](const auto& v) { return contains(r, v); });
    if (!conflict) continue;
    bool bound = true;
    for (const auto& ch : c.tree.children)
      if (ch.is_leaf() && ch.leaf.label != "objtype" && !contains(r, ch.leaf))
        bound = false;
    if (bound) return true;
  }
  return false;
}

}  // namespace

bool condition_holds(const std::optional<ConditionTree>& condition,
                     const AttributeSet* attrs) {
  if (!condition) return true;
  return evaluate_tree(*condition, [&](const std::string& leaf) {
    return attrs && leaf_holds(leaf, *attrs);
  });
}

PolicyDecision decide(const std::vector<PolicySpec>& policies,
                      const SatTuple& request, const AttributeSet* attrs) {
  PolicyDecision out;
  for (std::size_t i = 0; i < policies.size(); ++i)
    if (policies[i].tuple == request) out.matched.push_back(i);
  if (out.matched.empty()) {
    out.reason = "no-matching-policy";
    return out;
  }
  for (auto i : out.matched) {
    if (condition_holds(policies[i].condition, attrs)) {
      out.permit = true;
      out.reason = "permit";
      return out;
    }
  }
  out.reason = "condition-not-satisfied";
  return out;
}

bool activate(RbacWorld& world, const std::string& requester,
              const std::string& role, const AttributeSet* attrs) {
  for (const auto& rule : world.role_rules) {
    if (rule.requester != requester) continue;
    if (std::find(rule.roles.begin(), rule.roles.end(), role) ==
        rule.roles.end())
      continue;
    if (!condition_holds(rule.activation_condition, attrs)) continue;
    world.sessions[requester].insert(role);
    return true;
  }
  return false;
}

bool deactivate(RbacWorld& world, const std::string& requester,
                const std::string& role) {
  auto it = world.sessions.find(requester);
  if (it == world.sessions.end()) return false;
  bool removed = it->second.erase(role) > 0;
  if (it->second.empty()) world.sessions.erase(it);
  return removed;
}

bool access(const RbacWorld& world, const std::string& requester,
            const std::string& role, const std::string& action,
            const std::string& target, const AttributeSet* attrs,
            bool use_hierarchy) {
  auto session = world.sessions.find(requester);
  if (session == world.sessions.end() || !session->second.contains(role))
    return false;

  auto granted_to = [&](const std::string& r) {
    for (const auto& rule : world.permission_rules) {
      if (rule.role != r) continue;
      bool listed = std::find(rule.permissions.begin(), rule.permissions.end(),
                              std::pair{action, target}) !=
                    rule.permissions.end();
      if (listed && condition_holds(rule.grant_condition, attrs)) return true;
    }
    return false;
  };
  if (granted_to(role)) return true;
  if (!use_hierarchy || !world.hierarchy) return false;

  const auto& roles = world.hierarchy->roles;
  if (std::find(roles.begin(), roles.end(), role) == roles.end()) return false;
  std::set<std::string> seen{role};
  std::deque<std::string> queue{role};
  while (!queue.empty()) {
    std::string r = queue.front();
    queue.pop_front();
    for (const auto& [derived, base] : world.hierarchy->extends) {
      if (derived != r || seen.contains(base)) continue;
      if (granted_to(base)) return true;
      seen.insert(base);
      queue.push_back(base);
    }
  }
  return false;
}

bool egrant(ConstraintWorld& world, const egrant::ConstraintRequest& request) {
  auto elements = egrant::request_elements(request);
  auto& records = world.history[request.requester_id];
  for (const auto& c : world.constraints) {
    if (violates(c, elements, records)) {
      if (records.empty()) world.history.erase(request.requester_id);
      return false;
    }
  }
  records.push_back(std::move(elements));
  return true;
}

bool cleartext_decide(ReferenceState& state, const Request& request) {
  return std::visit(
      [&](const auto& r) -> bool {
        using T = std::decay_t<decltype(r)>;
        auto attrs = [](const auto& a) { return a ? &*a : nullptr; };
        if constexpr (std::is_same_v<T, TupleRequest>) {
          return decide(state.policies, r.tuple, attrs(r.attributes)).permit;
        } else if constexpr (std::is_same_v<T, ActivationRequest>) {
          return activate(state.rbac, r.requester, r.role,
                          attrs(r.attributes));
        } else if constexpr (std::is_same_v<T, AccessRequest>) {
          return access(state.rbac, r.requester, r.role, r.action, r.target,
                        attrs(r.attributes));
        } else {
          return egrant(state.constraints, r);
        }
      },
      request);
}

}  // namespace cipherpdp::reference
