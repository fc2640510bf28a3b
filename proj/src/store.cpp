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

#include "cipherpdp/store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

namespace cipherpdp::store {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void io_fail(const std::string& what, const fs::path& path) {
  fail(Errc::io_error, what + " " + path.string() + ": " + std::strerror(errno));
}

}  // namespace

void write_file_atomic(const fs::path& path, std::string_view content) {
  fs::path tmp = path;
  tmp += ".tmp";
  int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) io_fail("cannot create", tmp);
  std::size_t done = 0;
  while (done < content.size()) {
    ssize_t n = ::write(fd, content.data() + done, content.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      ::close(fd);
      io_fail("cannot write", tmp);
    }
    done += static_cast<std::size_t>(n);
  }
  if (::fsync(fd) != 0) {
    ::close(fd);
    io_fail("cannot sync", tmp);
  }
  ::close(fd);
  if (::rename(tmp.c_str(), path.c_str()) != 0) io_fail("cannot rename", tmp);
  int dir = ::open(path.parent_path().empty() ? "." : path.parent_path().c_str(),
                   O_RDONLY | O_DIRECTORY | O_CLOEXEC);
  if (dir >= 0) {
    ::fsync(dir);
    ::close(dir);
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_fail("cannot open", path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

Json tagged(std::string_view collection, Json data) {
  return Json{{"format", "cipherpdp/" + std::string(collection) + "/v1"},
              {"data", std::move(data)}};
}

const Json& untag(const Json& doc, std::string_view collection) {
  std::string want = "cipherpdp/" + std::string(collection) + "/v1";
  if (!doc.is_object() || !doc.contains("format") || !doc.contains("data") ||
      doc.at("format") != want)
    fail(Errc::parse_error, "expected a " + want + " document");
  return doc.at("data");
}

StoreRoot::StoreRoot(fs::path dir) : dir_(std::move(dir)) {}

const std::vector<std::string>& StoreRoot::collections() {
  static const std::vector<std::string> names{
      "params",    "keystore",    "policies", "roles",   "permissions",
      "hierarchy", "constraints", "sessions", "history"};
  return names;
}

fs::path StoreRoot::file(std::string_view collection) const {
  return dir_ / (std::string(collection) + ".json");
}

bool StoreRoot::initialized() const { return fs::exists(file("params")); }

Json StoreRoot::read(std::string_view collection) const {
  return untag(parse_json(read_file(file(collection))), collection);
}

void StoreRoot::write(std::string_view collection, Json data) const {
  write_file_atomic(file(collection),
                    dump_json(tagged(collection, std::move(data))));
}

void StoreRoot::init(const sde::PublicParams& params) {
  if (initialized())
    fail(Errc::io_error, "store already initialised at " + dir_.string());
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) fail(Errc::io_error, "cannot create " + dir_.string());
  ServerState empty;
  empty.params = params;
  save(empty);
}

sde::PublicParams StoreRoot::load_params() const {
  auto params = decode<sde::PublicParams>(read("params"), "params");
  sde::validate(params);
  return params;
}

ServerState StoreRoot::load() const {
  ServerState s;
  s.params = load_params();
  s.keystore = decode<sde::KeyStore>(read("keystore"), "keystore");
  s.policies = decode<authz::PolicyStore>(read("policies"), "policies");

  Json roles = read("roles");
  auto hierarchy = read("hierarchy");
  s.rbac = rbac::RbacStore::restore(
      decode<std::vector<rbac::RoleAssignment>>(roles.at("assignments"),
                                                "roles"),
      decode<std::vector<rbac::PermissionAssignment>>(read("permissions"),
                                                      "permissions"),
      hierarchy.is_null()
          ? std::nullopt
          : std::optional(decode<rbac::RoleHierarchyGraph>(hierarchy,
                                                           "hierarchy")),
      decode<rbac::Sessions>(read("sessions"), "sessions"),
      decode<std::uint64_t>(roles.at("next_id"), "roles"));

  Json constraints = read("constraints");
  s.constraints.constraints = decode<std::vector<egrant::ConstraintTree>>(
      constraints.at("constraints"), "constraints");
  s.constraints.next_id =
      decode<std::uint64_t>(constraints.at("next_id"), "constraints");
  s.history = decode<egrant::AccessHistory>(read("history"), "history");
  return s;
}

void StoreRoot::save_keystore(const sde::KeyStore& keystore) const {
  write("keystore", keystore);
}

void StoreRoot::save_policies(const authz::PolicyStore& policies) const {
  write("policies", policies);
}

void StoreRoot::save_sessions(const rbac::Sessions& sessions) const {
  write("sessions", sessions);
}

void StoreRoot::save_rbac(const rbac::RbacStore& store) const {
  write("roles", Json{{"next_id", store.next_id()},
                      {"assignments", store.role_assignments()}});
  write("permissions", store.permission_assignments());
  write("hierarchy",
        store.hierarchy() ? Json(*store.hierarchy()) : Json(nullptr));
  save_sessions(store.sessions());
}

void StoreRoot::save_constraints(const ConstraintCollection& c) const {
  write("constraints",
        Json{{"next_id", c.next_id}, {"constraints", c.constraints}});
}

void StoreRoot::save_history(const egrant::AccessHistory& history) const {
  write("history", history);
}

void StoreRoot::save(const ServerState& state) const {
  write("params", state.params);
  save_keystore(state.keystore);
  save_policies(state.policies);
  save_rbac(state.rbac);
  save_constraints(state.constraints);
  save_history(state.history);
}

Json StoreRoot::dump() const {
  Json out = Json::object();
  for (const auto& name : collections())
    out[name] = parse_json(read_file(file(name)));
  return out;
}

}  // namespace cipherpdp::store
