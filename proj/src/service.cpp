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

#include "cipherpdp/service.hpp"

#include <functional>
#include <map>

#include "cipherpdp/counters.hpp"

namespace cipherpdp::service {

namespace {

Json counters_json(const OpCounts& c) {
  return Json{{"client_enc", c.client_enc}, {"server_reenc", c.server_reenc},
              {"client_td", c.client_td},   {"server_td", c.server_td},
              {"match", c.match}};
}

Json ok_response() { return Json{{"ok", true}}; }

Json id_response(const std::string& id) {
  Json out = ok_response();
  out["ids"] = Json::array({id});
  return out;
}

template <class T>
T field(const Json& payload, const char* key) {
  return payload.at(key).get<T>();
}

template <class T>
std::optional<T> optional_field(const Json& payload, const char* key) {
  if (!payload.contains(key) || payload.at(key).is_null()) return std::nullopt;
  return payload.at(key).get<T>();
}

}  // namespace

Json decision_response(bool permit, std::string_view reason) {
  return Json{{"ok", true},
              {"decision", permit ? "permit" : "deny"},
              {"reason", reason}};
}

Json error_response(Errc code, std::string_view verb,
                    std::string_view message) {
  return Json{{"ok", false},
              {"error",
               {{"code", to_string(code)}, {"verb", verb}, {"message", message}}}};
}

Service::Service(sde::PublicParams params, ServiceOptions options)
    : params_(std::move(params)), options_(std::move(options)) {
  sde::validate(params_);
  if (options_.store) {
    store_.emplace(*options_.store);
    if (store_->initialized())
      fail(Errc::io_error, "store exists; load it with Service::open");
    store_->init(params_);
  }
}

Service::Service(store::ServerState state, ServiceOptions options)
    : params_(std::move(state.params)),
      options_(std::move(options)),
      keystore_(std::move(state.keystore)),
      policies_(std::move(state.policies)),
      rbac_(std::move(state.rbac)) {
  store_.emplace(*options_.store);
  constraints_.restore(std::move(state.constraints.constraints),
                       std::move(state.history), state.constraints.next_id);
}

std::unique_ptr<Service> Service::open(const std::filesystem::path& store,
                                       ServiceOptions options) {
  options.store = store;
  store::StoreRoot root(store);
  if (!root.initialized())
    fail(Errc::io_error, "no store at " + store.string());
  return std::unique_ptr<Service>(new Service(root.load(), std::move(options)));
}

const std::vector<std::string>& Service::verbs() {
  static const std::vector<std::string> names{
      "import-key",        "deploy-policy",      "delete-policy",
      "evaluate-request",  "revoke-user",        "assign-roles",
      "assign-permissions", "delete-assignment", "deploy-hierarchy",
      "activate-role",     "deactivate-role",    "access-request",
      "deploy-constraint", "delete-constraint",  "egrant-request",
      "dump-history"};
  return names;
}

Json Service::handle_envelope(const Json& envelope) {
  if (!envelope.is_object() || !envelope.contains("verb") ||
      !envelope.at("verb").is_string())
    return error_response(Errc::protocol_error, "", "missing verb");
  static const Json empty = Json::object();
  const Json& payload =
      envelope.contains("payload") ? envelope.at("payload") : empty;
  return handle(envelope.at("verb").get<std::string>(), payload);
}

Json Service::handle(std::string_view verb, const Json& payload) {
  CountScope scope;
  Json out;
  try {
    if (!payload.is_object())
      fail(Errc::protocol_error, "payload must be an object");
    out = dispatch(verb, payload);
  } catch (const nlohmann::json::exception& e) {
    return error_response(Errc::protocol_error, verb, e.what());
  } catch (const Error& e) {
    Errc code = e.code() == Errc::parse_error ? Errc::protocol_error : e.code();
    return error_response(code, verb, e.what());
  }
  if (options_.instrument) out["counters"] = counters_json(scope.elapsed());
  return out;
}

Json Service::dispatch(std::string_view verb, const Json& payload) {
  using Handler = Json (Service::*)(const Json&);
  static const std::map<std::string, Handler, std::less<>> table{
      {"import-key", &Service::import_key},
      {"deploy-policy", &Service::deploy_policy},
      {"delete-policy", &Service::delete_policy},
      {"evaluate-request", &Service::evaluate_request},
      {"revoke-user", &Service::revoke_user},
      {"assign-roles", &Service::assign_roles},
      {"assign-permissions", &Service::assign_permissions},
      {"delete-assignment", &Service::delete_assignment},
      {"deploy-hierarchy", &Service::deploy_hierarchy},
      {"activate-role", &Service::activate_role},
      {"deactivate-role", &Service::deactivate_role},
      {"access-request", &Service::access_request},
      {"deploy-constraint", &Service::deploy_constraint},
      {"delete-constraint", &Service::delete_constraint},
      {"egrant-request", &Service::egrant_request},
      {"dump-history", &Service::dump_history},
  };
  auto it = table.find(verb);
  if (it == table.end())
    fail(Errc::protocol_error, "unknown verb '" + std::string(verb) + "'");
  return (this->*(it->second))(payload);
}

Json Service::import_key(const Json& payload) {
  auto key = field<sde::ServerKeySet>(payload, "key");
  std::unique_lock lock(keys_mutex_);
  if (!keystore_.insert(key))
    fail(Errc::already_issued, "'" + key.user_id + "' is already registered");
  if (store_) store_->save_keystore(keystore_);
  return ok_response();
}

Json Service::revoke_user(const Json& payload) {
  auto user = field<std::string>(payload, "user");
  std::unique_lock lock(keys_mutex_);
  if (!authz::user_revocation(user, keystore_))
    fail(Errc::user_not_found, "unknown user '" + user + "'");
  if (store_) store_->save_keystore(keystore_);
  return ok_response();
}

Json Service::deploy_policy(const Json& payload) {
  auto admin = field<std::string>(payload, "admin");
  auto policy = field<authz::ClientEncryptedPolicy>(payload, "policy");
  std::shared_lock keys(keys_mutex_);
  auto stored = authz::policy_reenc(policy, admin, keystore_, params_);
  std::unique_lock lock(policies_mutex_);
  std::string id = policies_.add(std::move(stored));
  if (store_) store_->save_policies(policies_);
  return id_response(id);
}

Json Service::delete_policy(const Json& payload) {
  auto id = field<std::string>(payload, "id");
  std::unique_lock lock(policies_mutex_);
  if (!policies_.remove(id)) fail(Errc::not_found, "no policy '" + id + "'");
  if (store_) store_->save_policies(policies_);
  return ok_response();
}

Json Service::evaluate_request(const Json& payload) {
  auto request = field<authz::EncryptedRequestTuple>(payload, "request");
  auto attrs = optional_field<authz::EncryptedAttributeList>(payload,
                                                             "attributes");
  std::shared_lock keys(keys_mutex_);
  std::shared_lock lock(policies_mutex_);
  auto d = authz::evaluate_request(request, attrs ? &*attrs : nullptr,
                                   policies_, keystore_, params_);
  Json out = decision_response(d.permit, d.reason);
  out["ids"] = d.matched;
  return out;
}

Json Service::assign_roles(const Json& payload) {
  auto admin = field<std::string>(payload, "admin");
  auto assignment = field<rbac::ClientRoleAssignment>(payload, "assignment");
  std::shared_lock keys(keys_mutex_);
  auto stored =
      rbac::role_assignment_reenc(assignment, admin, keystore_, params_);
  std::unique_lock lock(rbac_mutex_);
  std::string id = rbac_.add_role_assignment(std::move(stored));
  if (store_) store_->save_rbac(rbac_);
  return id_response(id);
}

Json Service::assign_permissions(const Json& payload) {
  auto admin = field<std::string>(payload, "admin");
  auto assignment =
      field<rbac::ClientPermissionAssignment>(payload, "assignment");
  std::shared_lock keys(keys_mutex_);
  auto stored =
      rbac::permission_assignment_reenc(assignment, admin, keystore_, params_);
  std::unique_lock lock(rbac_mutex_);
  std::string id = rbac_.add_permission_assignment(std::move(stored));
  if (store_) store_->save_rbac(rbac_);
  return id_response(id);
}

Json Service::delete_assignment(const Json& payload) {
  auto id = field<std::string>(payload, "id");
  std::unique_lock lock(rbac_mutex_);
  if (!rbac_.remove_assignment(id))
    fail(Errc::not_found, "no assignment '" + id + "'");
  if (store_) store_->save_rbac(rbac_);
  return ok_response();
}

Json Service::deploy_hierarchy(const Json& payload) {
  auto admin = field<std::string>(payload, "admin");
  auto graph = field<rbac::ClientRoleHierarchy>(payload, "hierarchy");
  std::shared_lock keys(keys_mutex_);
  auto stored = rbac::hierarchy_reenc(graph, admin, keystore_, params_);
  std::unique_lock lock(rbac_mutex_);
  rbac_.set_hierarchy(std::move(stored));
  if (store_) store_->save_rbac(rbac_);
  return ok_response();
}

Json Service::activate_role(const Json& payload) {
  auto request = field<rbac::ActivationRequest>(payload, "request");
  std::shared_lock keys(keys_mutex_);
  std::unique_lock lock(rbac_mutex_);
  bool granted = rbac::activate_role(request, rbac_, keystore_, params_);
  if (granted && store_) store_->save_sessions(rbac_.sessions());
  return decision_response(granted, granted ? "permit" : "role-not-assigned");
}

Json Service::deactivate_role(const Json& payload) {
  auto request = field<rbac::ActivationRequest>(payload, "request");
  std::shared_lock keys(keys_mutex_);
  std::unique_lock lock(rbac_mutex_);
  bool removed = rbac::deactivate_role(request, rbac_, keystore_, params_);
  if (removed && store_) store_->save_sessions(rbac_.sessions());
  return decision_response(removed, removed ? "permit" : "role-not-active");
}

Json Service::access_request(const Json& payload) {
  auto request = field<rbac::AccessRequest>(payload, "request");
  bool use_hierarchy = payload.value("use_hierarchy", true);
  std::shared_lock keys(keys_mutex_);
  std::shared_lock lock(rbac_mutex_);
  bool granted = rbac::access_request(request, rbac_, keystore_, params_,
                                      nullptr, use_hierarchy);
  return decision_response(granted, granted ? "permit" : "access-denied");
}

Json Service::deploy_constraint(const Json& payload) {
  auto admin = field<std::string>(payload, "admin");
  auto constraint = field<egrant::ClientConstraint>(payload, "constraint");
  std::shared_lock keys(keys_mutex_);
  auto stored = egrant::constraint_reenc(constraint, admin, keystore_, params_);
  std::string id = constraints_.deploy(std::move(stored));
  if (store_) {
    std::lock_guard persist(persist_mutex_);
    store_->save_constraints(
        {constraints_.constraints(), constraints_.next_id()});
  }
  return id_response(id);
}

Json Service::delete_constraint(const Json& payload) {
  auto id = field<std::string>(payload, "id");
  if (!constraints_.remove(id))
    fail(Errc::not_found, "no constraint '" + id + "'");
  if (store_) {
    std::lock_guard persist(persist_mutex_);
    store_->save_constraints(
        {constraints_.constraints(), constraints_.next_id()});
  }
  return ok_response();
}

Json Service::egrant_request(const Json& payload) {
  auto request = field<egrant::EgrantRequest>(payload, "request");
  egrant::EvalTrace trace;
  bool granted;
  {
    std::shared_lock keys(keys_mutex_);
    granted = constraints_.evaluate(request, keystore_, params_, &trace);
  }
  if (granted) persist_history();
  Json out =
      decision_response(granted, granted ? "permit" : "constraint-violation");
  if (!granted) out["ids"] = Json::array({trace.violated});
  return out;
}

Json Service::dump_history(const Json&) {
  if (!options_.test_verbs)
    fail(Errc::protocol_error, "dump-history is only available in test mode");
  Json out = ok_response();
  out["history"] = constraints_.history();
  return out;
}

void Service::persist_history() {
  if (!store_) return;
  std::lock_guard persist(persist_mutex_);
  store_->save_history(constraints_.history());
}

}  // namespace cipherpdp::service
