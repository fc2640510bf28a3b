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

#include "cipherpdp/tkma.hpp"

#include "cipherpdp/store.hpp"

namespace cipherpdp::tkma {

namespace fs = std::filesystem;

TkmaState tkma_init(const sde::InitOptions& options) {
  auto [params, msk] = sde::init(options);
  return {std::move(params), std::move(msk), {}};
}

std::pair<sde::ClientKeySet, sde::ServerKeySet> tkma_issue(
    TkmaState& state, const std::string& user_id, Rng& rng) {
  if (user_id.empty()) fail(Errc::invalid_argument, "empty user id");
  if (state.issued.contains(user_id))
    fail(Errc::already_issued, "keys already issued to '" + user_id + "'");
  auto keys = sde::keygen(state.msk, state.params, user_id, rng);
  state.issued.insert(user_id);
  return keys;
}

bool tkma_revoke(TkmaState& state, const std::string& user_id) {
  return state.issued.erase(user_id) > 0;
}

void to_json(Json& j, const TkmaState& v) {
  j = Json{{"params", v.params}, {"msk", v.msk}, {"issued", v.issued}};
}

void from_json(const Json& j, TkmaState& v) {
  v.params = j.at("params").get<sde::PublicParams>();
  v.msk = j.at("msk").get<sde::MasterSecretKey>();
  v.issued = j.at("issued").get<std::set<std::string>>();
}

void save_state(const fs::path& dir, const TkmaState& state) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(Errc::io_error, "cannot create " + dir.string());
  store::write_file_atomic(dir / "tkma.json",
                           dump_json(store::tagged("tkma", state)));
  store::write_file_atomic(dir / "params.json",
                           dump_json(store::tagged("params", state.params)));
}

TkmaState load_state(const fs::path& dir) {
  auto doc = parse_json(store::read_file(dir / "tkma.json"));
  auto state = decode<TkmaState>(store::untag(doc, "tkma"), "tkma state");
  sde::validate(state.params);
  return state;
}

void write_client_key(const fs::path& path, const sde::ClientKeySet& key,
                      const sde::PublicParams& params) {
  store::write_file_atomic(
      path, dump_json(store::tagged("client-key",
                                    Json{{"key", key}, {"params", params}})));
}

void write_server_key(const fs::path& path, const sde::ServerKeySet& key) {
  store::write_file_atomic(path, dump_json(store::tagged("server-key", key)));
}

std::pair<sde::ClientKeySet, sde::PublicParams> read_client_key(
    const fs::path& path) {
  auto doc = parse_json(store::read_file(path));
  const Json& data = store::untag(doc, "client-key");
  auto key = decode<sde::ClientKeySet>(data.at("key"), "client key");
  auto params = decode<sde::PublicParams>(data.at("params"), "params");
  sde::validate(params);
  return {std::move(key), std::move(params)};
}

sde::ServerKeySet read_server_key(const fs::path& path) {
  auto doc = parse_json(store::read_file(path));
  return decode<sde::ServerKeySet>(store::untag(doc, "server-key"),
                                   "server key");
}

}  // namespace cipherpdp::tkma
