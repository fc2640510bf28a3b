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

// cipherpdp: key authority, admin and requester front end.
//
// Commands talk to a store directly (--store) or to a running service
// (--connect). Exit status: 0 permit/ok, 1 deny, 2 error or usage.

#include <csignal>
#include <filesystem>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cipherpdp/authz.hpp"
#include "cipherpdp/constraints.hpp"
#include "cipherpdp/rbac.hpp"
#include "cipherpdp/serialize.hpp"
#include "cipherpdp/service.hpp"
#include "cipherpdp/store.hpp"
#include "cipherpdp/tkma.hpp"
#include "cipherpdp/wire.hpp"

namespace fs = std::filesystem;
using namespace cipherpdp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDeny = 1;
constexpr int kExitError = 2;

struct Globals {
  bool json = false;
  std::string seed;
  std::string store;
  std::string connect;
  std::string invocation;  // mixed into seeded randomness
};

Globals g;

std::unique_ptr<Rng> make_rng() {
  if (g.seed.empty()) return std::make_unique<SystemRng>();
  return std::make_unique<DeterministicRng>(g.seed + "|" + g.invocation);
}

// Sends one verb to the service named by --connect or --store.
Json call(const std::string& verb, const Json& payload) {
  if (!g.connect.empty()) return wire::WireClient(g.connect).call(verb, payload);
  if (g.store.empty())
    fail(Errc::invalid_argument, "one of --store or --connect is required");
  service::ServiceOptions options;
#ifdef CIPHERPDP_TEST_HOOKS
  options.test_verbs = true;
#endif
  auto svc = service::Service::open(g.store, options);
  return svc->handle(verb, payload);
}

int report(const Json& response) {
  if (g.json) std::cout << response.dump(2) << "\n";
  if (!response.value("ok", false)) {
    const Json& e = response.at("error");
    if (!g.json)
      std::cerr << "error: " << e.value("code", "") << ": "
                << e.value("message", "") << "\n";
    return kExitError;
  }
  if (response.contains("decision")) {
    bool permit = response.at("decision") == "permit";
    if (!g.json) {
      if (permit)
        std::cout << "permit\n";
      else
        std::cout << "deny: " << response.value("reason", "") << "\n";
    }
    return permit ? kExitOk : kExitDeny;
  }
  if (!g.json) {
    if (response.contains("ids"))
      for (const auto& id : response.at("ids")) std::cout << id.get<std::string>() << "\n";
    else
      std::cout << "ok\n";
  }
  return kExitOk;
}

struct LoadedKey {
  sde::ClientKeySet key;
  sde::PublicParams params;
};

LoadedKey load_key(const std::string& path) {
  auto [key, params] = tkma::read_client_key(path);
  return {std::move(key), std::move(params)};
}

std::optional<ConditionTree> condition_option(const std::string& text) {
  if (text.empty()) return std::nullopt;
  return normalize_condition(parse_condition(text));
}

std::pair<std::string, std::string> split_pair(const std::string& s, char sep,
                                               const char* what) {
  auto at = s.find(sep);
  if (at == std::string::npos || at == 0 || at + 1 == s.size())
    fail(Errc::invalid_argument,
         std::string("expected ") + what + ", got '" + s + "'");
  return {s.substr(0, at), s.substr(at + 1)};
}

// Attributes are submitted by the PIP identity when --pip-key is given,
// otherwise by the requester.
std::optional<authz::EncryptedAttributeList> encrypt_attributes(
    const std::vector<std::string>& attrs, const std::string& pip_key,
    const LoadedKey& requester, Rng& rng) {
  if (attrs.empty()) return std::nullopt;
  AttributeSet set = AttributeSet::parse(attrs);
  if (pip_key.empty())
    return authz::attributes_request(set, requester.key, requester.params, rng);
  LoadedKey pip = load_key(pip_key);
  return authz::attributes_request(set, pip.key, pip.params, rng);
}

void add_attributes(Json& payload, const char* key,
                    const std::optional<authz::EncryptedAttributeList>& attrs) {
  if (attrs) payload[key] = *attrs;
}

// --- tkma --------------------------------------------------------------------

struct TkmaArgs {
  std::string dir;
  std::string profile = "prod";
  unsigned p_bits = 0;
  unsigned q_bits = 0;
  std::string user;
  std::string out;
} tkma_args;

int tkma_init() {
  auto profile = sde::parse_profile(tkma_args.profile);
  if (!profile) fail(Errc::invalid_argument, "unknown profile " + tkma_args.profile);
  sde::InitOptions options = sde::options_for(*profile);
  if (tkma_args.p_bits) options.p_bits = tkma_args.p_bits;
  if (tkma_args.q_bits) options.q_bits = tkma_args.q_bits;
  if (!g.seed.empty()) options.seed = Bytes(g.seed.begin(), g.seed.end());
  if (fs::exists(fs::path(tkma_args.dir) / "tkma.json"))
    fail(Errc::io_error, "TKMA state already exists in " + tkma_args.dir);
  auto state = tkma::tkma_init(options);
  tkma::save_state(tkma_args.dir, state);
  if (!g.json) std::cout << "ok\n";
  return kExitOk;
}

int tkma_issue() {
  auto state = tkma::load_state(tkma_args.dir);
  auto rng = make_rng();
  auto [client, server] = tkma::tkma_issue(state, tkma_args.user, *rng);
  fs::path out = tkma_args.out.empty() ? fs::path(tkma_args.dir) : fs::path(tkma_args.out);
  fs::create_directories(out);
  tkma::write_client_key(out / (tkma_args.user + ".client.json"), client,
                         state.params);
  tkma::write_server_key(out / (tkma_args.user + ".server.json"), server);
  tkma::save_state(tkma_args.dir, state);
  if (!g.json) std::cout << "ok\n";
  return kExitOk;
}

int tkma_revoke() {
  auto state = tkma::load_state(tkma_args.dir);
  if (!tkma::tkma_revoke(state, tkma_args.user))
    fail(Errc::user_not_found, "no keys issued to '" + tkma_args.user + "'");
  tkma::save_state(tkma_args.dir, state);
  if (!g.json) std::cout << "ok\n";
  return kExitOk;
}

// --- store -------------------------------------------------------------------

std::string params_file;

int store_init() {
  auto doc = parse_json(store::read_file(params_file));
  auto params = decode<sde::PublicParams>(store::untag(doc, "params"), "params");
  sde::validate(params);
  store::StoreRoot(g.store).init(params);
  if (!g.json) std::cout << "ok\n";
  return kExitOk;
}

int store_dump() {
  std::cout << store::StoreRoot(g.store).dump().dump(2) << "\n";
  return kExitOk;
}

// --- admin -------------------------------------------------------------------

struct AdminArgs {
  std::string key;
  std::string server_key;
  std::string policy;
  std::string id;
  std::string user;
  std::string requester;
  std::vector<std::string> roles;
  std::string role;
  std::vector<std::string> permissions;
  std::string condition;
  std::vector<std::string> extends;
  std::vector<std::string> hbdsod;
  std::string objtype;
  std::vector<std::string> bindings;
  std::string group_label = "action";
  bool no_instance_binding = false;
  bool deny_exact_repeat = false;
  std::vector<std::string> cw_branches;
  std::string spec;
} admin;

int admin_import_key() {
  auto key = tkma::read_server_key(admin.server_key);
  return report(call("import-key", Json{{"key", key}}));
}

int admin_deploy_policy() {
  auto k = load_key(admin.key);
  auto rng = make_rng();
  auto policy = authz::policy_enc(parse_policy(admin.policy), k.key, k.params, *rng);
  return report(call("deploy-policy",
                     Json{{"admin", k.key.user_id}, {"policy", policy}}));
}

int admin_delete(const std::string& verb) {
  return report(call(verb, Json{{"id", admin.id}}));
}

int admin_revoke_user() {
  return report(call("revoke-user", Json{{"user", admin.user}}));
}

int admin_assign_roles() {
  auto k = load_key(admin.key);
  auto rng = make_rng();
  auto assignment =
      rbac::role_assignment_enc(admin.roles, admin.requester,
                                condition_option(admin.condition), k.key,
                                k.params, *rng);
  return report(call("assign-roles",
                     Json{{"admin", k.key.user_id}, {"assignment", assignment}}));
}

int admin_assign_permissions() {
  auto k = load_key(admin.key);
  auto rng = make_rng();
  std::vector<std::pair<std::string, std::string>> perms;
  for (const auto& p : admin.permissions)
    perms.push_back(split_pair(p, ':', "action:target"));
  auto assignment = rbac::permission_assignment_enc(
      admin.role, perms, condition_option(admin.condition), k.key, k.params,
      *rng);
  return report(call("assign-permissions",
                     Json{{"admin", k.key.user_id}, {"assignment", assignment}}));
}

int admin_deploy_hierarchy() {
  auto k = load_key(admin.key);
  auto rng = make_rng();
  rbac::RoleGraph graph{admin.roles, {}};
  for (const auto& e : admin.extends)
    graph.extends.push_back(split_pair(e, ':', "derived:base"));
  auto hierarchy = rbac::hierarchy_enc(graph, k.key, k.params, *rng);
  return report(call("deploy-hierarchy",
                     Json{{"admin", k.key.user_id}, {"hierarchy", hierarchy}}));
}

egrant::LabeledValue labeled(const std::string& s) {
  auto [label, value] = split_pair(s, '=', "label=value");
  return {label, value};
}

egrant::ConstraintSpec constraint_from_args() {
  if (!admin.spec.empty())
    return decode<egrant::ConstraintSpec>(parse_json(admin.spec), "constraint");
  if (!admin.hbdsod.empty() && !admin.cw_branches.empty())
    fail(Errc::invalid_argument, "--hbdsod and --cw are exclusive");
  egrant::ConstraintSpec spec;
  if (!admin.hbdsod.empty()) {
    std::vector<egrant::LabeledValue> bindings;
    for (const auto& b : admin.bindings) bindings.push_back(labeled(b));
    spec = egrant::make_hbdsod(admin.hbdsod, admin.objtype, bindings,
                               admin.group_label);
    spec.bind_instance = !admin.no_instance_binding;
    spec.deny_exact_repeat = admin.deny_exact_repeat;
  } else if (!admin.cw_branches.empty()) {
    std::vector<std::vector<egrant::LabeledValue>> branches;
    for (const auto& b : admin.cw_branches) {
      std::vector<egrant::LabeledValue> leaves;
      std::stringstream in(b);
      for (std::string part; std::getline(in, part, ',');)
        leaves.push_back(labeled(part));
      branches.push_back(std::move(leaves));
    }
    spec = egrant::make_cw(branches);
  } else {
    fail(Errc::invalid_argument, "one of --hbdsod, --cw or --spec is required");
  }
  return spec;
}

int admin_deploy_constraint() {
  auto k = load_key(admin.key);
  auto rng = make_rng();
  auto constraint =
      egrant::constraint_enc(constraint_from_args(), k.key, k.params, *rng);
  return report(call("deploy-constraint",
                     Json{{"admin", k.key.user_id}, {"constraint", constraint}}));
}

// --- requester ---------------------------------------------------------------

struct RequesterArgs {
  std::string key;
  std::string pip_key;
  std::string subject;
  std::string role;
  std::string action;
  std::string target;
  std::string objtype;
  std::string instance;
  std::vector<std::string> domains;
  std::vector<std::string> attrs;
  bool no_hierarchy = false;
} req;

int requester_role(const std::string& verb) {
  auto k = load_key(req.key);
  auto rng = make_rng();
  auto request = rbac::activation_request(req.role, k.key, k.params, *rng);
  request.attributes = encrypt_attributes(req.attrs, req.pip_key, k, *rng);
  return report(call(verb, Json{{"request", request}}));
}

int requester_request() {
  auto k = load_key(req.key);
  auto rng = make_rng();
  SatTuple tuple{req.subject.empty() ? k.key.user_id : req.subject, req.action,
                 req.target};
  Json payload{{"request", authz::sat_request(tuple, k.key, k.params, *rng)}};
  add_attributes(payload, "attributes",
                 encrypt_attributes(req.attrs, req.pip_key, k, *rng));
  return report(call("evaluate-request", payload));
}

int requester_access() {
  auto k = load_key(req.key);
  auto rng = make_rng();
  auto request = rbac::access_request_enc(req.role, req.action, req.target,
                                          k.key, k.params, *rng);
  request.attributes = encrypt_attributes(req.attrs, req.pip_key, k, *rng);
  return report(call("access-request", Json{{"request", request},
                                            {"use_hierarchy", !req.no_hierarchy}}));
}

int requester_egrant() {
  auto k = load_key(req.key);
  auto rng = make_rng();
  egrant::ConstraintRequest r{k.key.user_id, req.role,     req.action,
                              req.objtype,   req.instance, req.domains,
                              AttributeSet::parse(req.attrs)};
  auto request = egrant::request_generate(r, k.key, k.params, *rng);
  return report(call("egrant-request", Json{{"request", request}}));
}

// --- serve -------------------------------------------------------------------

std::string socket_path;
bool instrument = false;

int serve() {
  service::ServiceOptions options;
  options.instrument = instrument;
#ifdef CIPHERPDP_TEST_HOOKS
  options.test_verbs = true;
#endif
  auto svc = service::Service::open(g.store, options);

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  wire::WireServer server(*svc, socket_path);
  server.start();
  if (!g.json) std::cout << "listening on " << socket_path << std::endl;
  int sig = 0;
  sigwait(&signals, &sig);
  server.stop();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Encrypted policy decision point"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--json", g.json, "Machine-readable output");
  app.add_option("--store", g.store, "Server store directory");
  app.add_option("--connect", g.connect, "Socket of a running service");
#ifdef CIPHERPDP_TEST_HOOKS
  app.add_option("--seed", g.seed, "Deterministic randomness (testing only)");
#endif

  std::function<int()> run;
  auto bind = [&](CLI::App* cmd, std::function<int()> f) {
    cmd->callback([&run, f] { run = f; });
  };

  auto* tkma = app.add_subcommand("tkma", "Key authority")->require_subcommand(1);
  auto* t_init = tkma->add_subcommand("init", "Generate parameters and master key");
  t_init->add_option("--dir", tkma_args.dir)->required();
  t_init->add_option("--profile", tkma_args.profile)
      ->check(CLI::IsMember({"toy", "test", "prod"}));
  t_init->add_option("--p-bits", tkma_args.p_bits);
  t_init->add_option("--q-bits", tkma_args.q_bits);
  bind(t_init, tkma_init);
  auto* t_issue = tkma->add_subcommand("issue", "Issue a user's key pair");
  t_issue->add_option("--dir", tkma_args.dir)->required();
  t_issue->add_option("--user", tkma_args.user)->required();
  t_issue->add_option("--out", tkma_args.out, "Directory for the key files");
  bind(t_issue, tkma_issue);
  auto* t_revoke = tkma->add_subcommand("revoke", "Allow an id to be re-issued");
  t_revoke->add_option("--dir", tkma_args.dir)->required();
  t_revoke->add_option("--user", tkma_args.user)->required();
  bind(t_revoke, tkma_revoke);

  auto* st = app.add_subcommand("store", "Server store")->require_subcommand(1);
  auto* s_init = st->add_subcommand("init", "Create an empty store");
  s_init->add_option("--params", params_file, "params.json from the TKMA")->required();
  bind(s_init, store_init);
#ifdef CIPHERPDP_TEST_HOOKS
  bind(st->add_subcommand("dump", "Print every collection"), store_dump);
#endif

  auto* ad = app.add_subcommand("admin", "Administrator commands")->require_subcommand(1);
  auto* a_import = ad->add_subcommand("import-key", "Register a server key share");
  a_import->add_option("--server-key", admin.server_key)->required();
  bind(a_import, admin_import_key);
  auto* a_policy = ad->add_subcommand("deploy-policy", "Encrypt and deploy a policy");
  a_policy->add_option("--key", admin.key)->required();
  a_policy->add_option("--policy", admin.policy, "if <cond> then can <S, A, T>")->required();
  bind(a_policy, admin_deploy_policy);
  auto* a_delpolicy = ad->add_subcommand("delete-policy", "Remove a policy");
  a_delpolicy->add_option("--id", admin.id)->required();
  bind(a_delpolicy, [] { return admin_delete("delete-policy"); });
  auto* a_roles = ad->add_subcommand("assign-roles", "Assign roles to a requester");
  a_roles->add_option("--key", admin.key)->required();
  a_roles->add_option("--requester", admin.requester)->required();
  a_roles->add_option("--role", admin.roles)->required();
  a_roles->add_option("--condition", admin.condition, "Activation condition");
  bind(a_roles, admin_assign_roles);
  auto* a_perms = ad->add_subcommand("assign-permissions", "Grant permissions to a role");
  a_perms->add_option("--key", admin.key)->required();
  a_perms->add_option("--role", admin.role)->required();
  a_perms->add_option("--permission", admin.permissions, "action:target")->required();
  a_perms->add_option("--condition", admin.condition, "Grant condition");
  bind(a_perms, admin_assign_permissions);
  auto* a_delassign = ad->add_subcommand("delete-assignment", "Remove a role or permission assignment");
  a_delassign->add_option("--id", admin.id)->required();
  bind(a_delassign, [] { return admin_delete("delete-assignment"); });
  auto* a_hier = ad->add_subcommand("deploy-hierarchy", "Deploy the role hierarchy");
  a_hier->add_option("--key", admin.key)->required();
  a_hier->add_option("--role", admin.roles)->required();
  a_hier->add_option("--extends", admin.extends, "derived:base");
  bind(a_hier, admin_deploy_hierarchy);
  auto* a_con = ad->add_subcommand("deploy-constraint", "Deploy an HBDSoD or Chinese Wall constraint");
  a_con->add_option("--key", admin.key)->required();
  a_con->add_option("--hbdsod", admin.hbdsod, "Conflicting group member");
  a_con->add_option("--objtype", admin.objtype);
  a_con->add_option("--bind", admin.bindings, "Extra binding label=value");
  a_con->add_option("--group-label", admin.group_label)
      ->check(CLI::IsMember({"action", "role"}));
  a_con->add_flag("--no-instance-binding", admin.no_instance_binding);
  a_con->add_flag("--deny-exact-repeat", admin.deny_exact_repeat);
  a_con->add_option("--cw", admin.cw_branches, "Branch label=value[,label=value...]");
  a_con->add_option("--spec", admin.spec, "Constraint as JSON");
  bind(a_con, admin_deploy_constraint);
  auto* a_delcon = ad->add_subcommand("delete-constraint", "Remove a constraint");
  a_delcon->add_option("--id", admin.id)->required();
  bind(a_delcon, [] { return admin_delete("delete-constraint"); });
  auto* a_revoke = ad->add_subcommand("revoke-user", "Delete a user's server key share");
  a_revoke->add_option("--user", admin.user)->required();
  bind(a_revoke, admin_revoke_user);

  auto* rq = app.add_subcommand("requester", "Requester commands")->require_subcommand(1);
  auto add_attrs = [](CLI::App* cmd) {
    cmd->add_option("--attr", req.attrs, "name=value or name=v#bits");
    cmd->add_option("--pip-key", req.pip_key, "Key of the attribute provider");
  };
  auto* r_act = rq->add_subcommand("activate-role", "Activate a role");
  r_act->add_option("--key", req.key)->required();
  r_act->add_option("--role", req.role)->required();
  add_attrs(r_act);
  bind(r_act, [] { return requester_role("activate-role"); });
  auto* r_deact = rq->add_subcommand("deactivate-role", "Deactivate a role");
  r_deact->add_option("--key", req.key)->required();
  r_deact->add_option("--role", req.role)->required();
  bind(r_deact, [] { return requester_role("deactivate-role"); });
  auto* r_req = rq->add_subcommand("request", "Evaluate a <subject, action, target> request");
  r_req->add_option("--key", req.key)->required();
  r_req->add_option("--subject", req.subject, "Defaults to the key's user id");
  r_req->add_option("--action", req.action)->required();
  r_req->add_option("--target", req.target)->required();
  add_attrs(r_req);
  bind(r_req, requester_request);
  auto* r_access = rq->add_subcommand("access", "Exercise a permission of an active role");
  r_access->add_option("--key", req.key)->required();
  r_access->add_option("--role", req.role)->required();
  r_access->add_option("--action", req.action)->required();
  r_access->add_option("--target", req.target)->required();
  r_access->add_flag("--no-hierarchy", req.no_hierarchy);
  add_attrs(r_access);
  bind(r_access, requester_access);
  auto* r_eg = rq->add_subcommand("egrant-request", "Request under dynamic constraints");
  r_eg->add_option("--key", req.key)->required();
  r_eg->add_option("--role", req.role)->required();
  r_eg->add_option("--action", req.action)->required();
  r_eg->add_option("--objtype", req.objtype)->required();
  r_eg->add_option("--instance", req.instance)->required();
  r_eg->add_option("--domain", req.domains, "Domain path, outermost first");
  r_eg->add_option("--attr", req.attrs, "Context name=value or name=v#bits");
  bind(r_eg, requester_egrant);

  auto* sv = app.add_subcommand("serve", "Run the service on a Unix socket");
  sv->add_option("--socket", socket_path)->required();
#ifdef CIPHERPDP_TEST_HOOKS
  sv->add_flag("--instrument", instrument, "Attach operation counts to responses");
#endif
  bind(sv, serve);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg == "--seed") {
      ++i;
      continue;
    }
    if (arg.starts_with("--seed=")) continue;
    g.invocation += arg;
    g.invocation += '\x1f';
  }

  try {
    return run ? run() : kExitError;
  } catch (const Error& e) {
    if (g.json)
      std::cout << service::error_response(e.code(), "", e.what()).dump(2) << "\n";
    else
      std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}
