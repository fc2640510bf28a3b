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

// Randomized worlds run through the encrypted engines and the cleartext
// reference side by side. Each runner returns the number of decisions on
// which the two disagree.

#include <algorithm>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cipherpdp/authz.hpp"
#include "cipherpdp/constraints.hpp"
#include "cipherpdp/numeric.hpp"
#include "cipherpdp/rbac.hpp"
#include "cipherpdp/reference.hpp"
#include "support.hpp"

namespace cipherpdp::testing {

template <class T>
const T& pick(std::mt19937& gen, const std::vector<T>& items) {
  return items[std::uniform_int_distribution<std::size_t>(0, items.size() - 1)(
      gen)];
}

inline bool chance(std::mt19937& gen, double p) {
  return std::bernoulli_distribution(p)(gen);
}

inline int between(std::mt19937& gen, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(gen);
}

// Attribute vocabulary shared by conditions and requests. Numeric widths
// are fixed per scenario so that patterns can line up.
struct AttributeVocabulary {
  std::vector<std::pair<std::string, std::vector<std::string>>> strings = {
      {"Location", {"ward-a", "ward-b", "lab"}},
      {"Shift", {"day", "night"}}};
  std::vector<std::pair<std::string, unsigned>> numerics;

  explicit AttributeVocabulary(std::mt19937& gen) {
    numerics = {{"AT", static_cast<unsigned>(between(gen, 2, 5))},
                {"Level", static_cast<unsigned>(between(gen, 1, 3))}};
  }
};

inline ConditionTree random_predicate(std::mt19937& gen,
                                      const AttributeVocabulary& vocab) {
  if (chance(gen, 0.5)) {
    const auto& [name, values] = pick(gen, vocab.strings);
    return ConditionTree::make_leaf(name + "=" + pick(gen, values));
  }
  const auto& [name, bits] = pick(gen, vocab.numerics);
  static const std::vector<CompareOp> ops = {
      CompareOp::lt, CompareOp::gt, CompareOp::le, CompareOp::ge,
      CompareOp::eq};
  std::uint64_t v = std::uniform_int_distribution<std::uint64_t>(
      0, (1ull << bits) - 1)(gen);
  return compile_numeric_comparison({name, pick(gen, ops), v, bits});
}

// Gate over one to three predicates; at most about ten leaves.
inline std::optional<ConditionTree> random_condition(
    std::mt19937& gen, const AttributeVocabulary& vocab) {
  if (chance(gen, 0.3)) return std::nullopt;
  int n = between(gen, 1, 3);
  std::vector<ConditionTree> children;
  for (int i = 0; i < n; ++i) children.push_back(random_predicate(gen, vocab));
  ConditionTree tree = n == 1 ? children.front()
                       : chance(gen, 0.4)
                           ? ConditionTree::make_and(std::move(children))
                       : chance(gen, 0.5)
                           ? ConditionTree::make_or(std::move(children))
                           : ConditionTree::make_threshold(
                                 static_cast<std::size_t>(between(gen, 1, n)),
                                 std::move(children));
  return normalize_condition(tree);
}

inline std::optional<AttributeSet> random_attributes(
    std::mt19937& gen, const AttributeVocabulary& vocab) {
  if (chance(gen, 0.15)) return std::nullopt;
  AttributeSet attrs;
  for (const auto& [name, values] : vocab.strings)
    if (chance(gen, 0.7)) attrs.add_string(name, pick(gen, values));
  for (const auto& [name, bits] : vocab.numerics)
    if (chance(gen, 0.7))
      attrs.add_numeric(name,
                        std::uniform_int_distribution<std::uint64_t>(
                            0, (1ull << bits) - 1)(gen),
                        bits);
  return attrs;
}

inline authz::EncryptedAttributeList encrypt_attributes(
    World& world, const AttributeSet& attrs, const std::string& pip) {
  return authz::attributes_request(attrs, world.user(pip), world.params,
                                   world.rng);
}

// --- policies ---------------------------------------------------------------

struct EspoonScenario {
  std::vector<PolicySpec> policies;
  std::vector<reference::TupleRequest> requests;
};

inline EspoonScenario random_espoon_scenario(std::mt19937& gen) {
  static const std::vector<std::string> subjects = {"Doctor", "Nurse",
                                                    "Intern"};
  static const std::vector<std::string> actions = {"read", "write"};
  static const std::vector<std::string> targets = {"record", "chart"};
  AttributeVocabulary vocab(gen);
  EspoonScenario s;
  int n = between(gen, 0, 20);
  for (int i = 0; i < n; ++i) {
    PolicySpec p;
    p.tuple = {pick(gen, subjects), pick(gen, actions), pick(gen, targets)};
    p.condition = random_condition(gen, vocab);
    s.policies.push_back(std::move(p));
  }
  for (int i = 0; i < 6; ++i) {
    reference::TupleRequest r;
    if (!s.policies.empty() && chance(gen, 0.7))
      r.tuple = pick(gen, s.policies).tuple;
    else
      r.tuple = {pick(gen, subjects), pick(gen, actions), pick(gen, targets)};
    r.attributes = random_attributes(gen, vocab);
    s.requests.push_back(std::move(r));
  }
  return s;
}

// Admin, requester and PIP are distinct identities.
inline std::size_t run_espoon_scenario(World& world, const EspoonScenario& s,
                                       std::size_t* permits = nullptr) {
  authz::PolicyStore store;
  for (const auto& p : s.policies) {
    auto client = authz::policy_enc(p, world.user("admin"), world.params,
                                    world.rng);
    store.add(authz::policy_reenc(client, "admin", world.keystore,
                                  world.params));
  }
  std::size_t diverged = 0;
  for (const auto& r : s.requests) {
    auto req = authz::sat_request(r.tuple, world.user("requester"),
                                  world.params, world.rng);
    std::optional<authz::EncryptedAttributeList> attrs;
    if (r.attributes) attrs = encrypt_attributes(world, *r.attributes, "pip");
    auto got = authz::evaluate_request(req, attrs ? &*attrs : nullptr, store,
                                       world.keystore, world.params);
    auto want = reference::decide(s.policies, r.tuple,
                                  r.attributes ? &*r.attributes : nullptr);
    if (got.permit != want.permit) ++diverged;
    if (permits && got.permit) ++*permits;
  }
  return diverged;
}

// --- roles ------------------------------------------------------------------

struct RbacStep {
  enum Kind { activate, deactivate, access } kind = activate;
  std::string requester;
  std::string role;
  std::string action;
  std::string target;
  std::optional<AttributeSet> attributes;
  bool use_hierarchy = true;
};

struct RbacScenario {
  reference::RbacWorld world;  // sessions empty
  std::vector<RbacStep> steps;
};

inline std::string role_name(int i) { return "R" + std::to_string(i); }

inline RbacScenario random_rbac_scenario(std::mt19937& gen, int max_roles = 8,
                                         int steps = 20) {
  static const std::vector<std::string> actions = {"read", "write", "sign"};
  static const std::vector<std::string> targets = {"record", "chart",
                                                   "order"};
  static const std::vector<std::string> requesters = {"alice", "bob"};
  AttributeVocabulary vocab(gen);
  RbacScenario s;
  int roles = between(gen, 2, max_roles);
  for (const auto& who : requesters) {
    int rules = between(gen, 1, 2);
    for (int i = 0; i < rules; ++i) {
      reference::RoleRule rule;
      rule.requester = who;
      for (int r = 0; r < roles; ++r)
        if (chance(gen, 0.4)) rule.roles.push_back(role_name(r));
      if (rule.roles.empty()) rule.roles.push_back(role_name(0));
      if (chance(gen, 0.3)) rule.activation_condition = random_condition(gen, vocab);
      s.world.role_rules.push_back(std::move(rule));
    }
  }
  for (int r = 0; r < roles; ++r) {
    if (chance(gen, 0.2)) continue;
    reference::PermissionRule rule;
    rule.role = role_name(r);
    int n = between(gen, 1, 4);
    for (int i = 0; i < n; ++i)
      rule.permissions.emplace_back(pick(gen, actions), pick(gen, targets));
    if (chance(gen, 0.3)) rule.grant_condition = random_condition(gen, vocab);
    s.world.permission_rules.push_back(std::move(rule));
  }
  if (chance(gen, 0.8)) {
    rbac::RoleGraph graph;
    for (int r = 0; r < roles; ++r)
      if (r == 0 || chance(gen, 0.85)) graph.roles.push_back(role_name(r));
    // Lower indices derive from higher ones: acyclic by construction.
    for (std::size_t i = 0; i < graph.roles.size(); ++i)
      for (std::size_t j = i + 1; j < graph.roles.size(); ++j)
        if (chance(gen, 0.3)) graph.extends.emplace_back(graph.roles[i], graph.roles[j]);
    s.world.hierarchy = std::move(graph);
  }
  for (int i = 0; i < steps; ++i) {
    RbacStep step;
    int k = between(gen, 0, 9);
    step.kind = k < 3 ? RbacStep::activate
                : k < 4 ? RbacStep::deactivate
                        : RbacStep::access;
    step.requester = pick(gen, requesters);
    step.role = role_name(between(gen, 0, roles - 1));
    step.action = pick(gen, actions);
    step.target = pick(gen, targets);
    if (step.kind != RbacStep::deactivate)
      step.attributes = random_attributes(gen, vocab);
    step.use_hierarchy = chance(gen, 0.8);
    s.steps.push_back(std::move(step));
  }
  return s;
}

inline void deploy_rbac_world(World& world, const reference::RbacWorld& w,
                              rbac::RbacStore& store) {
  const auto& admin = world.user("admin");
  for (const auto& rule : w.role_rules) {
    world.user(rule.requester);
    auto c = rbac::role_assignment_enc(rule.roles, rule.requester,
                                       rule.activation_condition, admin,
                                       world.params, world.rng);
    store.add_role_assignment(
        rbac::role_assignment_reenc(c, "admin", world.keystore, world.params));
  }
  for (const auto& rule : w.permission_rules) {
    auto c = rbac::permission_assignment_enc(rule.role, rule.permissions,
                                             rule.grant_condition, admin,
                                             world.params, world.rng);
    store.add_permission_assignment(rbac::permission_assignment_reenc(
        c, "admin", world.keystore, world.params));
  }
  if (w.hierarchy) {
    auto c = rbac::hierarchy_enc(*w.hierarchy, admin, world.params, world.rng);
    store.set_hierarchy(
        rbac::hierarchy_reenc(c, "admin", world.keystore, world.params));
  }
}

inline std::size_t run_rbac_scenario(World& world, const RbacScenario& s,
                                     std::size_t* grants = nullptr) {
  rbac::RbacStore store;
  deploy_rbac_world(world, s.world, store);
  reference::RbacWorld oracle = s.world;
  std::size_t diverged = 0;
  for (const auto& step : s.steps) {
    const auto& key = world.user(step.requester);
    const AttributeSet* clear = step.attributes ? &*step.attributes : nullptr;
    std::optional<authz::EncryptedAttributeList> attrs;
    if (clear) attrs = encrypt_attributes(world, *clear, "pip");
    bool got = false;
    bool want = false;
    switch (step.kind) {
      case RbacStep::activate: {
        auto req = rbac::activation_request(step.role, key, world.params,
                                            world.rng);
        req.attributes = attrs;
        got = rbac::activate_role(req, store, world.keystore, world.params);
        want = reference::activate(oracle, step.requester, step.role, clear);
        break;
      }
      case RbacStep::deactivate: {
        auto req = rbac::activation_request(step.role, key, world.params,
                                            world.rng);
        got = rbac::deactivate_role(req, store, world.keystore, world.params);
        want = reference::deactivate(oracle, step.requester, step.role);
        break;
      }
      case RbacStep::access: {
        auto req = rbac::access_request_enc(step.role, step.action,
                                            step.target, key, world.params,
                                            world.rng);
        req.attributes = attrs;
        got = rbac::access_request(req, store, world.keystore, world.params,
                                   nullptr, step.use_hierarchy);
        want = reference::access(oracle, step.requester, step.role,
                                 step.action, step.target, clear,
                                 step.use_hierarchy);
        break;
      }
    }
    if (got != want) ++diverged;
    if (grants && got) ++*grants;
  }
  return diverged;
}

// --- constraints ------------------------------------------------------------

struct ConstraintScenario {
  std::vector<egrant::ConstraintSpec> constraints;
  std::vector<egrant::ConstraintRequest> requests;
};

inline ConstraintScenario random_constraint_scenario(std::mt19937& gen,
                                                     int requests = 12) {
  static const std::vector<std::string> actions = {"Issue", "Approve",
                                                   "Review", "Pay"};
  static const std::vector<std::string> roles = {"Clerk", "Manager"};
  static const std::vector<std::string> objtypes = {"Purchase-Order",
                                                    "Invoice"};
  static const std::vector<std::string> instances = {"#1", "#2"};
  static const std::vector<std::string> level1 = {"Google", "Microsoft",
                                                  "Apple"};
  static const std::vector<std::string> level2 = {"Marketing", "Sales"};
  static const std::vector<std::string> requesters = {"u1", "u2"};
  static const std::vector<std::string> sites = {"HQ", "Branch"};

  ConstraintScenario s;
  int n = between(gen, 1, 3);
  for (int i = 0; i < n; ++i) {
    if (chance(gen, 0.55)) {
      bool by_role = chance(gen, 0.2);
      const auto& pool = by_role ? roles : actions;
      std::vector<std::string> group;
      for (const auto& a : pool)
        if (chance(gen, 0.6)) group.push_back(a);
      if (group.size() < 2) group = {pool[0], pool[1]};
      std::vector<egrant::LabeledValue> bindings;
      if (chance(gen, 0.2))
        bindings.push_back({"context", "Site=" + pick(gen, sites)});
      if (chance(gen, 0.2)) bindings.push_back({"domain-1", pick(gen, level1)});
      std::string objtype =
          by_role && chance(gen, 0.5) ? "" : pick(gen, objtypes);
      auto spec = egrant::make_hbdsod(group, objtype, bindings,
                                      by_role ? "role" : "action");
      spec.bind_instance = chance(gen, 0.8);
      spec.deny_exact_repeat = chance(gen, 0.3);
      s.constraints.push_back(std::move(spec));
    } else {
      std::vector<std::vector<egrant::LabeledValue>> branches;
      std::vector<std::string> firms = level1;
      std::shuffle(firms.begin(), firms.end(), gen);
      int b = between(gen, 2, 3);
      for (int j = 0; j < b; ++j) {
        std::vector<egrant::LabeledValue> branch{{"domain-1", firms[j]}};
        if (chance(gen, 0.4)) branch.push_back({"domain-2", pick(gen, level2)});
        if (chance(gen, 0.2)) branch.push_back({"objtype", pick(gen, objtypes)});
        branches.push_back(std::move(branch));
      }
      s.constraints.push_back(egrant::make_cw(branches));
    }
  }
  for (int i = 0; i < requests; ++i) {
    egrant::ConstraintRequest r;
    r.requester_id = pick(gen, requesters);
    r.role = pick(gen, roles);
    r.action = pick(gen, actions);
    r.objtype = pick(gen, objtypes);
    r.instance = pick(gen, instances);
    int depth = between(gen, 0, 2);
    if (depth >= 1) r.domains.push_back(pick(gen, level1));
    if (depth >= 2) r.domains.push_back(pick(gen, level2));
    if (chance(gen, 0.4)) r.context.add_string("Site", pick(gen, sites));
    s.requests.push_back(std::move(r));
  }
  return s;
}

inline std::size_t run_constraint_scenario(World& world,
                                           const ConstraintScenario& s,
                                           std::size_t* grants = nullptr) {
  egrant::ConstraintEngine engine;
  for (const auto& spec : s.constraints) {
    auto c = egrant::constraint_enc(spec, world.user("admin"), world.params,
                                    world.rng);
    engine.deploy(
        egrant::constraint_reenc(c, "admin", world.keystore, world.params));
  }
  reference::ConstraintWorld oracle{s.constraints, {}};
  std::size_t diverged = 0;
  for (const auto& r : s.requests) {
    auto req = egrant::request_generate(r, world.user(r.requester_id),
                                        world.params, world.rng);
    bool got = engine.evaluate(req, world.keystore, world.params);
    bool want = reference::egrant(oracle, r);
    if (got != want) ++diverged;
    if (grants && got) ++*grants;
  }
  return diverged;
}

}  // namespace cipherpdp::testing
