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

// History-based dynamic constraints over encrypted requests.
//
// Two constraint families are supported:
//  * HBDSoD: AND(1-of-n group, bindings...). The group lists conflicting
//    actions (or roles); the bindings fix the object type and optionally
//    context or domain elements. A requester who already performed one
//    group member on an object instance may not perform another on it.
//  * CW (Chinese Wall): OR over two or more conflict branches, each a leaf
//    or an AND of leaves over domain levels, object type and context. Once
//    a requester's history satisfies one branch, requests satisfying any
//    other branch are denied.
//
// Constraint leaves hold a server ciphertext and a server trapdoor. History
// records hold labelled server ciphertexts of every granted request.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cipherpdp/attributes.hpp"
#include "cipherpdp/counters.hpp"
#include "cipherpdp/sde.hpp"
#include "cipherpdp/tree.hpp"

namespace cipherpdp::egrant {

enum class ConstraintKind { hbdsod, cw };

std::string_view to_string(ConstraintKind kind);
std::optional<ConstraintKind> parse_constraint_kind(std::string_view name);

struct LabeledValue {
  std::string label;  // see parse_label()
  std::string value;

  bool operator==(const LabeledValue&) const = default;
};

using CleartextConstraintTree = TreeNode<LabeledValue>;

struct ConstraintSpec {
  ConstraintKind kind = ConstraintKind::hbdsod;
  CleartextConstraintTree tree;
  // HBDSoD only: a violating record must concern the same instance.
  bool bind_instance = true;
  // HBDSoD only: also deny repeating the very action already performed.
  bool deny_exact_repeat = false;

  bool operator==(const ConstraintSpec&) const = default;
};

// Throws Error(invalid_constraint) when the tree does not have the shape
// required by its kind.
void validate_constraint(const ConstraintSpec& spec);

// AND(OR(group...), objtype, bindings...). `group_label` is "action" or
// "role"; `objtype` may be empty only for role groups.
ConstraintSpec make_hbdsod(const std::vector<std::string>& group,
                           const std::string& objtype,
                           const std::vector<LabeledValue>& bindings = {},
                           const std::string& group_label = "action");

// OR over branches; a one-element branch becomes a leaf.
ConstraintSpec make_cw(const std::vector<std::vector<LabeledValue>>& branches);

// Cleartext 4-tuple with optional domain path and context.
struct ConstraintRequest {
  std::string requester_id;
  std::string role;
  std::string action;
  std::string objtype;
  std::string instance;
  std::vector<std::string> domains;  // domains[0] is level 1
  AttributeSet context;
};

// role, action, objtype, instance, domain-1.., then one "context" element
// per string attribute and per numeric bit pattern.
std::vector<LabeledValue> request_elements(const ConstraintRequest& request);

struct ClientConstraintLeaf {
  std::string label;
  sde::ClientEncryptedElement cipher;
  sde::ClientTrapdoor trapdoor;
};

struct ConstraintLeaf {
  std::string label;
  sde::ServerEncryptedElement cipher;
  sde::ServerTrapdoor trapdoor;

  bool operator==(const ConstraintLeaf&) const = default;
};

struct ClientConstraint {
  ConstraintKind kind = ConstraintKind::hbdsod;
  TreeNode<ClientConstraintLeaf> tree;
  bool bind_instance = true;
  bool deny_exact_repeat = false;
};

struct ConstraintTree {
  std::string constraint_id;
  ConstraintKind kind = ConstraintKind::hbdsod;
  TreeNode<ConstraintLeaf> tree;
  bool bind_instance = true;
  bool deny_exact_repeat = false;

  bool operator==(const ConstraintTree&) const = default;
};

struct RequestElement {
  std::string label;
  sde::ClientTrapdoor trapdoor;
  sde::ClientEncryptedElement cipher;
};

struct EgrantRequest {
  std::string requester_id;
  std::vector<RequestElement> elements;
};

struct LabeledCipher {
  std::string label;
  sde::ServerEncryptedElement cipher;

  bool operator==(const LabeledCipher&) const = default;
};

struct SessionRecord {
  std::vector<LabeledCipher> elements;

  bool operator==(const SessionRecord&) const = default;
};

using AccessHistory = std::map<std::string, std::vector<SessionRecord>>;

struct LabeledTrapdoor {
  std::string label;
  sde::ServerTrapdoor trapdoor;
};

// --- client side -----------------------------------------------------------

ClientConstraint constraint_enc(const ConstraintSpec& spec,
                                const sde::ClientKeySet& admin,
                                const sde::PublicParams& params, Rng& rng);

EgrantRequest request_generate(const ConstraintRequest& request,
                               const sde::ClientKeySet& requester,
                               const sde::PublicParams& params, Rng& rng);

// --- server side -----------------------------------------------------------

// Re-validates the shape from the leaf labels.
ConstraintTree constraint_reenc(const ClientConstraint& constraint,
                                const std::string& admin_id,
                                const sde::KeyStore& keystore,
                                const sde::PublicParams& params);

// role, action, objtype and instance exactly once; domain levels contiguous
// from 1; otherwise only context. Throws Error(invalid_argument).
void validate_request(const EgrantRequest& request);

// A leaf holds when its ciphertext matches a request trapdoor carrying the
// same label. A null constraint is satisfied by every request.
bool check_tree_satisfiability(const ConstraintTree* constraint,
                               std::span<const LabeledTrapdoor> request,
                               const sde::PublicParams& params);

struct EvalTrace {
  OpCounts satisfiability;
  OpCounts history;
  std::size_t records_scanned = 0;
  std::string violated;  // id of the first violated constraint
};

// Decides the request against every constraint and this requester's
// records; on grant appends one record. Not synchronised: callers that
// share `history` across threads use ConstraintEngine.
bool constraint_eval_session_up(const EgrantRequest& request,
                                std::span<const ConstraintTree> constraints,
                                AccessHistory& history,
                                const sde::KeyStore& keystore,
                                const sde::PublicParams& params,
                                EvalTrace* trace = nullptr);

// Thread-safe constraint repository plus access history. Evaluation for one
// requester is a single critical section; different requesters proceed in
// parallel; deployment excludes evaluation. Ids are "constraint-<n>".
class ConstraintEngine {
 public:
  ConstraintEngine() = default;
  ConstraintEngine(const ConstraintEngine&) = delete;
  ConstraintEngine& operator=(const ConstraintEngine&) = delete;

  std::string deploy(ConstraintTree constraint);
  bool remove(const std::string& constraint_id);

  bool evaluate(const EgrantRequest& request, const sde::KeyStore& keystore,
                const sde::PublicParams& params, EvalTrace* trace = nullptr);

  std::vector<ConstraintTree> constraints() const;
  AccessHistory history() const;
  std::vector<SessionRecord> history_of(const std::string& requester) const;
  std::uint64_t next_id() const;

  void restore(std::vector<ConstraintTree> constraints, AccessHistory history,
               std::uint64_t next_id);

 private:
  struct RequesterState {
    std::mutex mutex;
    std::vector<SessionRecord> records;
  };

  RequesterState& state_for(const std::string& requester);

  mutable std::shared_mutex constraints_mutex_;
  std::vector<ConstraintTree> constraints_;
  std::uint64_t next_id_ = 1;

  mutable std::mutex requesters_mutex_;
  std::map<std::string, std::unique_ptr<RequesterState>> requesters_;
};

}  // namespace cipherpdp::egrant
