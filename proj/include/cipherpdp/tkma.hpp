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

// Trusted key management authority: owns the master secret, splits it per
// user into a client share and a server share.

#include <filesystem>
#include <set>
#include <string>
#include <utility>

#include "cipherpdp/serialize.hpp"
#include "cipherpdp/sde.hpp"

namespace cipherpdp::tkma {

struct TkmaState {
  sde::PublicParams params;
  sde::MasterSecretKey msk;
  std::set<std::string> issued;

  bool operator==(const TkmaState&) const = default;
};

TkmaState tkma_init(const sde::InitOptions& options);

// Error(already_issued) when `user_id` holds live keys.
std::pair<sde::ClientKeySet, sde::ServerKeySet> tkma_issue(
    TkmaState& state, const std::string& user_id, Rng& rng);

// Allows the id to be issued again; false when it was not issued.
bool tkma_revoke(TkmaState& state, const std::string& user_id);

void to_json(Json& j, const TkmaState& v);
void from_json(const Json& j, TkmaState& v);

// <dir>/tkma.json holds the state, <dir>/params.json the public parameters.
void save_state(const std::filesystem::path& dir, const TkmaState& state);
TkmaState load_state(const std::filesystem::path& dir);

// Single-document key files, tagged "client-key" and "server-key".
void write_client_key(const std::filesystem::path& path,
                      const sde::ClientKeySet& key,
                      const sde::PublicParams& params);
void write_server_key(const std::filesystem::path& path,
                      const sde::ServerKeySet& key);
// Returns the key and the parameters it was issued under.
std::pair<sde::ClientKeySet, sde::PublicParams> read_client_key(
    const std::filesystem::path& path);
sde::ServerKeySet read_server_key(const std::filesystem::path& path);

}  // namespace cipherpdp::tkma
