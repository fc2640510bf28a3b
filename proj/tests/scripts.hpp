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

// Scenario scripts: client-side encryption done once, replayed as verb and
// payload pairs against the engines directly, a Service, or a socket. Every
// step yields one outcome string so runs can be compared verbatim.

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "cipherpdp/serialize.hpp"
#include "scenarios.hpp"

namespace cipherpdp::testing {

struct Step {
  std::string verb;
  Json payload;
};

struct Script {
  std::vector<Step> steps;
  // Reference outcome for decision steps, "" for deployment steps.
  std::vector<std::string> expected;
};

inline void push(Script& s, std::string verb, Json payload,
                 std::string expected = "") {
  s.steps.push_back({std::move(verb), std::move(payload)});
  s.expected.push_back(std::move(expected));
}

inline std::string verdict(bool permit) { return permit ? "permit" : "deny"; }

// Mixed script over all three engines. Keys are imported first.
inline Script build_script(World& world, std::mt19937& gen) {
  Script script;
  auto espoon = random_espoon_scenario(gen);
  auto roles = random_rbac_scenario(gen, 6, 12);
  auto cons = random_constraint_scenario(gen, 10);

  for (const char* id : {"admin", "requester", "pip", "alice", "bob", "u1",
                         "u2"})
    world.user(id);
  for (const auto& [id, key] : world.keystore.entries())
    push(script, "import-key", {{"key", key}});

  const auto& admin = world.user("admin");
  for (const auto& p : espoon.policies)
    push(script, "deploy-policy",
         {{"admin", "admin"},
          {"policy", authz::policy_enc(p, admin, world.params, world.rng)}});
  for (const auto& rule : roles.world.role_rules)
    push(script, "assign-roles",
         {{"admin", "admin"},
          {"assignment", rbac::role_assignment_enc(
                             rule.roles, rule.requester,
                             rule.activation_condition, admin, world.params,
                             world.rng)}});
  for (const auto& rule : roles.world.permission_rules)
    push(script, "assign-permissions",
         {{"admin", "admin"},
          {"assignment", rbac::permission_assignment_enc(
                             rule.role, rule.permissions, rule.grant_condition,
                             admin, world.params, world.rng)}});
  if (roles.world.hierarchy)
    push(script, "deploy-hierarchy",
         {{"admin", "admin"},
          {"hierarchy", rbac::hierarchy_enc(*roles.world.hierarchy, admin,
                                            world.params, world.rng)}});
  for (const auto& spec : cons.constraints)
    push(script, "deploy-constraint",
         {{"admin", "admin"},
          {"constraint",
           egrant::constraint_enc(spec, admin, world.params, world.rng)}});

  // Decisions, interleaved across engines.
  reference::ReferenceState oracle;
  oracle.policies = espoon.policies;
  oracle.rbac = roles.world;
  oracle.constraints.constraints = cons.constraints;
  std::size_t a = 0, b = 0, c = 0;
  while (a < espoon.requests.size() || b < roles.steps.size() ||
         c < cons.requests.size()) {
    int pick_engine = between(gen, 0, 2);
    if (pick_engine == 0 && a < espoon.requests.size()) {
      const auto& r = espoon.requests[a++];
      Json payload{{"request", authz::sat_request(r.tuple,
                                                  world.user("requester"),
                                                  world.params, world.rng)}};
      if (r.attributes)
        payload["attributes"] =
            encrypt_attributes(world, *r.attributes, "pip");
      push(script, "evaluate-request", std::move(payload),
           verdict(reference::cleartext_decide(oracle, r)));
    } else if (pick_engine == 1 && b < roles.steps.size()) {
      const auto& st = roles.steps[b++];
      const auto& key = world.user(st.requester);
      const AttributeSet* clear = st.attributes ? &*st.attributes : nullptr;
      if (st.kind == RbacStep::access) {
        auto req = rbac::access_request_enc(st.role, st.action, st.target, key,
                                            world.params, world.rng);
        if (clear) req.attributes = encrypt_attributes(world, *clear, "pip");
        push(script, "access-request",
             {{"request", req}, {"use_hierarchy", st.use_hierarchy}},
             verdict(reference::access(oracle.rbac, st.requester, st.role,
                                       st.action, st.target, clear,
                                       st.use_hierarchy)));
      } else {
        auto req = rbac::activation_request(st.role, key, world.params,
                                            world.rng);
        bool activate = st.kind == RbacStep::activate;
        if (activate && clear)
          req.attributes = encrypt_attributes(world, *clear, "pip");
        bool want =
            activate
                ? reference::activate(oracle.rbac, st.requester, st.role, clear)
                : reference::deactivate(oracle.rbac, st.requester, st.role);
        push(script, activate ? "activate-role" : "deactivate-role",
             {{"request", req}}, verdict(want));
      }
    } else if (pick_engine == 2 && c < cons.requests.size()) {
      const auto& r = cons.requests[c++];
      push(script, "egrant-request",
           {{"request", egrant::request_generate(r, world.user(r.requester_id),
                                                 world.params, world.rng)}},
           verdict(reference::cleartext_decide(oracle, r)));
    }
  }
  return script;
}

// Outcome of one response: "permit", "deny", "ok" or "error:<code>", with
// returned ids appended.
inline std::string outcome(const Json& response) {
  std::string out;
  if (!response.at("ok").get<bool>())
    return "error:" + response.at("error").at("code").get<std::string>();
  out = response.contains("decision")
            ? response.at("decision").get<std::string>()
            : "ok";
  if (response.contains("ids"))
    for (const auto& id : response.at("ids")) out += " " + id.get<std::string>();
  return out;
}

using Transport = std::function<Json(const std::string&, const Json&)>;

inline std::vector<std::string> replay(const Script& script,
                                       const Transport& call) {
  std::vector<std::string> out;
  for (const auto& step : script.steps)
    out.push_back(outcome(call(step.verb, step.payload)));
  return out;
}

// Applies a script straight to the engine types, without the service.
class DirectEngines {
 public:
  explicit DirectEngines(sde::PublicParams params)
      : params_(std::move(params)) {}

  std::string apply(const Step& step) {
    try {
      return run(step.verb, step.payload);
    } catch (const Error& e) {
      return "error:" + std::string(to_string(e.code()));
    }
  }

  std::vector<std::string> replay(const Script& script) {
    std::vector<std::string> out;
    for (const auto& step : script.steps) out.push_back(apply(step));
    return out;
  }

  const sde::KeyStore& keystore() const { return keystore_; }
  const authz::PolicyStore& policies() const { return policies_; }
  const rbac::RbacStore& rbac() const { return rbac_; }
  egrant::ConstraintEngine& constraints() { return constraints_; }

 private:
  template <class T>
  static T get(const Json& p, const char* key) {
    return decode<T>(p.at(key), key);
  }

  std::string run(const std::string& verb, const Json& p) {
    auto ids = [](const std::vector<std::string>& v) {
      std::string s;
      for (const auto& id : v) s += " " + id;
      return s;
    };
    if (verb == "import-key") {
      if (!keystore_.insert(get<sde::ServerKeySet>(p, "key")))
        fail(Errc::already_issued, "duplicate");
      return "ok";
    }
    if (verb == "revoke-user") {
      if (!authz::user_revocation(get<std::string>(p, "user"), keystore_))
        fail(Errc::user_not_found, "unknown");
      return "ok";
    }
    auto admin = [&] { return get<std::string>(p, "admin"); };
    if (verb == "deploy-policy")
      return "ok " + policies_.add(authz::policy_reenc(
                         get<authz::ClientEncryptedPolicy>(p, "policy"),
                         admin(), keystore_, params_));
    if (verb == "evaluate-request") {
      auto req = get<authz::EncryptedRequestTuple>(p, "request");
      std::optional<authz::EncryptedAttributeList> attrs;
      if (p.contains("attributes"))
        attrs = get<authz::EncryptedAttributeList>(p, "attributes");
      auto d = authz::evaluate_request(req, attrs ? &*attrs : nullptr,
                                       policies_, keystore_, params_);
      return verdict(d.permit) + ids(d.matched);
    }
    if (verb == "assign-roles")
      return "ok " + rbac_.add_role_assignment(rbac::role_assignment_reenc(
                         get<rbac::ClientRoleAssignment>(p, "assignment"),
                         admin(), keystore_, params_));
    if (verb == "assign-permissions")
      return "ok " +
             rbac_.add_permission_assignment(rbac::permission_assignment_reenc(
                 get<rbac::ClientPermissionAssignment>(p, "assignment"),
                 admin(), keystore_, params_));
    if (verb == "deploy-hierarchy") {
      rbac_.set_hierarchy(rbac::hierarchy_reenc(
          get<rbac::ClientRoleHierarchy>(p, "hierarchy"), admin(), keystore_,
          params_));
      return "ok";
    }
    if (verb == "activate-role")
      return verdict(rbac::activate_role(
          get<rbac::ActivationRequest>(p, "request"), rbac_, keystore_,
          params_));
    if (verb == "deactivate-role")
      return verdict(rbac::deactivate_role(
          get<rbac::ActivationRequest>(p, "request"), rbac_, keystore_,
          params_));
    if (verb == "access-request")
      return verdict(rbac::access_request(
          get<rbac::AccessRequest>(p, "request"), rbac_, keystore_, params_,
          nullptr, p.value("use_hierarchy", true)));
    if (verb == "deploy-constraint")
      return "ok " + constraints_.deploy(egrant::constraint_reenc(
                         get<egrant::ClientConstraint>(p, "constraint"),
                         admin(), keystore_, params_));
    if (verb == "egrant-request") {
      egrant::EvalTrace trace;
      bool granted = constraints_.evaluate(
          get<egrant::EgrantRequest>(p, "request"), keystore_, params_,
          &trace);
      return granted ? "permit" : "deny " + trace.violated;
    }
    fail(Errc::protocol_error, "unsupported verb " + verb);
  }

  sde::PublicParams params_;
  sde::KeyStore keystore_;
  authz::PolicyStore policies_;
  rbac::RbacStore rbac_;
  egrant::ConstraintEngine constraints_;
};

// Decision steps agree with the reference outcome.
inline std::size_t reference_divergence(const Script& script,
                                        const std::vector<std::string>& got) {
  std::size_t diverged = 0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    const auto& want = script.expected[i];
    if (want.empty()) continue;
    if (got[i].substr(0, want.size()) != want) ++diverged;
  }
  return diverged;
}

}  // namespace cipherpdp::testing
