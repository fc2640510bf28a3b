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

// Cleartext decision procedures with the same semantics as the encrypted
// engines. Tests compare the two; nothing here touches a key.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cipherpdp/attributes.hpp"
#include "cipherpdp/constraints.hpp"
#include "cipherpdp/policy.hpp"
#include "cipherpdp/rbac.hpp"

namespace cipherpdp::reference {

// A leaf "name=value" holds when the string attribute has that value; a
// bit-pattern leaf "name:**1*" holds when the numeric attribute has that
// width and bit. No attributes means no leaf holds.
bool condition_holds(const std::optional<ConditionTree>& condition,
                     const AttributeSet* attrs);

struct PolicyDecision {
  bool permit = false;
  std::vector<std::size_t> matched;  // indices into the policy list
  std::string reason;
};

PolicyDecision decide(const std::vector<PolicySpec>& policies,
                      const SatTuple& request, const AttributeSet* attrs);

struct RoleRule {
  std::string requester;
  std::vector<std::string> roles;
  std::optional<ConditionTree> activation_condition;
};

struct PermissionRule {
  std::string role;
  std::vector<std::pair<std::string, std::string>> permissions;
  std::optional<ConditionTree> grant_condition;
};

struct RbacWorld {
  std::vector<RoleRule> role_rules;
  std::vector<PermissionRule> permission_rules;
  std::optional<rbac::RoleGraph> hierarchy;
  std::map<std::string, std::set<std::string>> sessions;
};

bool activate(RbacWorld& world, const std::string& requester,
              const std::string& role, const AttributeSet* attrs);
bool deactivate(RbacWorld& world, const std::string& requester,
                const std::string& role);
bool access(const RbacWorld& world, const std::string& requester,
            const std::string& role, const std::string& action,
            const std::string& target, const AttributeSet* attrs,
            bool use_hierarchy = true);

struct ConstraintWorld {
  std::vector<egrant::ConstraintSpec> constraints;
  std::map<std::string, std::vector<std::vector<egrant::LabeledValue>>>
      history;
};

// Grants and records the request unless a constraint is violated.
bool egrant(ConstraintWorld& world, const egrant::ConstraintRequest& request);

// Everything a deployment holds, in cleartext.
struct ReferenceState {
  std::vector<PolicySpec> policies;
  RbacWorld rbac;
  ConstraintWorld constraints;
};

struct TupleRequest {
  SatTuple tuple;
  std::optional<AttributeSet> attributes;
};

struct ActivationRequest {
  std::string requester;
  std::string role;
  std::optional<AttributeSet> attributes;
};

struct AccessRequest {
  std::string requester;
  std::string role;
  std::string action;
  std::string target;
  std::optional<AttributeSet> attributes;
};

using Request = std::variant<TupleRequest, ActivationRequest, AccessRequest,
                             egrant::ConstraintRequest>;

// Deny by default; mutates sessions and history exactly as the encrypted
// engines do.
bool cleartext_decide(ReferenceState& state, const Request& request);

}  // namespace cipherpdp::reference
