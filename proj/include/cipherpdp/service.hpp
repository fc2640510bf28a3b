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

// The server-side policy decision point. Each verb maps to one engine
// operation; payloads and responses are JSON documents.
//
// Response: {"ok": true, "decision": "permit"|"deny", "reason": ...,
// "ids": [...], "counters": {...}} or
// {"ok": false, "error": {"code", "verb", "message"}}.

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "cipherpdp/constraints.hpp"
#include "cipherpdp/serialize.hpp"
#include "cipherpdp/store.hpp"

namespace cipherpdp::service {

struct ServiceOptions {
  // When set, every mutation is written through to this store.
  std::optional<std::filesystem::path> store;
  // Attach per-request operation counts to responses.
  bool instrument = false;
  // Enables dump-history.
  bool test_verbs = false;
};

class Service {
 public:
  explicit Service(sde::PublicParams params, ServiceOptions options = {});
  // Loads an initialised store and writes through to it.
  static std::unique_ptr<Service> open(const std::filesystem::path& store,
                                       ServiceOptions options = {});

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  Json handle(std::string_view verb, const Json& payload);
  // {"verb": ..., "payload": ...}
  Json handle_envelope(const Json& envelope);

  const sde::PublicParams& params() const { return params_; }
  static const std::vector<std::string>& verbs();

 private:
  Service(store::ServerState state, ServiceOptions options);

  Json dispatch(std::string_view verb, const Json& payload);

  Json import_key(const Json& payload);
  Json deploy_policy(const Json& payload);
  Json delete_policy(const Json& payload);
  Json evaluate_request(const Json& payload);
  Json revoke_user(const Json& payload);
  Json assign_roles(const Json& payload);
  Json assign_permissions(const Json& payload);
  Json delete_assignment(const Json& payload);
  Json deploy_hierarchy(const Json& payload);
  Json activate_role(const Json& payload);
  Json deactivate_role(const Json& payload);
  Json access_request(const Json& payload);
  Json deploy_constraint(const Json& payload);
  Json delete_constraint(const Json& payload);
  Json egrant_request(const Json& payload);
  Json dump_history(const Json& payload);

  void persist_history();

  const sde::PublicParams params_;
  const ServiceOptions options_;
  std::optional<store::StoreRoot> store_;

  mutable std::shared_mutex keys_mutex_;
  sde::KeyStore keystore_;

  mutable std::shared_mutex policies_mutex_;
  authz::PolicyStore policies_;

  mutable std::shared_mutex rbac_mutex_;
  rbac::RbacStore rbac_;

  egrant::ConstraintEngine constraints_;
  std::mutex persist_mutex_;
};

Json decision_response(bool permit, std::string_view reason);
Json error_response(Errc code, std::string_view verb, std::string_view message);

}  // namespace cipherpdp::service
