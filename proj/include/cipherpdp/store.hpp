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

// File-backed server state. One JSON document per collection, each tagged
// "cipherpdp/<collection>/v1" and replaced atomically on every write.
// Nothing in the store is secret to the server; the master key lives only
// in TKMA files.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "cipherpdp/authz.hpp"
#include "cipherpdp/constraints.hpp"
#include "cipherpdp/rbac.hpp"
#include "cipherpdp/serialize.hpp"

namespace cipherpdp::store {

// Writes to a sibling temporary file, fsyncs it and renames it over `path`.
// Throws Error(io_error).
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content);
std::string read_file(const std::filesystem::path& path);

Json tagged(std::string_view collection, Json data);
// Checks the format tag and returns the payload; Error(parse_error).
const Json& untag(const Json& doc, std::string_view collection);

struct ConstraintCollection {
  std::vector<egrant::ConstraintTree> constraints;
  std::uint64_t next_id = 1;
};

// Everything the service holds.
struct ServerState {
  sde::PublicParams params;
  sde::KeyStore keystore;
  authz::PolicyStore policies;
  rbac::RbacStore rbac;
  ConstraintCollection constraints;
  egrant::AccessHistory history;
};

class StoreRoot {
 public:
  explicit StoreRoot(std::filesystem::path dir);

  const std::filesystem::path& dir() const { return dir_; }
  bool initialized() const;

  // Creates the directory and every collection, empty. Error(io_error) if
  // the store is already initialised.
  void init(const sde::PublicParams& params);

  ServerState load() const;

  sde::PublicParams load_params() const;
  void save_keystore(const sde::KeyStore& keystore) const;
  void save_policies(const authz::PolicyStore& policies) const;
  // roles, permissions, hierarchy and sessions.
  void save_rbac(const rbac::RbacStore& store) const;
  void save_sessions(const rbac::Sessions& sessions) const;
  void save_constraints(const ConstraintCollection& constraints) const;
  void save_history(const egrant::AccessHistory& history) const;
  void save(const ServerState& state) const;

  // Every collection keyed by name, as stored.
  Json dump() const;

  static const std::vector<std::string>& collections();

 private:
  std::filesystem::path file(std::string_view collection) const;
  Json read(std::string_view collection) const;
  void write(std::string_view collection, Json data) const;

  std::filesystem::path dir_;
};

}  // namespace cipherpdp::store
