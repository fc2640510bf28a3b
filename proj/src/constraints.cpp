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

#include "cipherpdp/constraints.hpp"

#include <algorithm>
#include <set>

#include "cipherpdp/element.hpp"
#include "cipherpdp/error.hpp"
#include "cipherpdp/numeric.hpp"

namespace cipherpdp::egrant {

namespace {

[[noreturn]] void bad_shape(const std::string& msg) {
  fail(Errc::invalid_constraint, msg);
}

Label checked_label(const std::string& name) {
  auto label = parse_label(name);
  if (!label) bad_shape("unknown label '" + name + "'");
  return *label;
}

bool is_binding(const Label& l) {
  return l.kind == ElementKind::object || l.kind == ElementKind::context ||
         l.kind == ElementKind::domain;
}

// Shared by the cleartext and encrypted forms; `label_of` extracts the
// label name of a leaf payload.
template <class Leaf, class LabelOf>
void validate_shape(ConstraintKind kind, const TreeNode<Leaf>& root,
                    LabelOf label_of) {
  try {
    validate_structure(root);
  } catch (const Error& e) {
    bad_shape(e.what());
  }
  if (!root.is_gate()) bad_shape("constraint root must be a gate");

  if (kind == ConstraintKind::hbdsod) {
    if (root.required() != root.children.size())
      bad_shape("HBDSoD root must be an AND gate");
    const TreeNode<Leaf>* group = nullptr;
    std::size_t objtypes = 0;
    for (const auto& c : root.children) {
      if (c.is_constant()) bad_shape("constant node in constraint");
      if (c.is_gate()) {
        if (group) bad_shape("HBDSoD has more than one group");
        group = &c;
        continue;
      }
      Label l = checked_label(label_of(c.leaf));
      if (!is_binding(l))
        bad_shape("HBDSoD binding leaf has label " + label_name(l));
      if (l.kind == ElementKind::object) ++objtypes;
    }
    if (!group) bad_shape("HBDSoD without a group");
    if (group->required() != 1)
      bad_shape("HBDSoD group must be 1-of-n");
    if (group->children.size() < 2)
      bad_shape("HBDSoD group needs at least two members");
    std::optional<Label> group_label;
    for (const auto& m : group->children) {
      if (!m.is_leaf()) bad_shape("HBDSoD group members must be leaves");
      Label l = checked_label(label_of(m.leaf));
      if (l.kind != ElementKind::action && l.kind != ElementKind::role)
        bad_shape("HBDSoD group members must be actions or roles");
      if (group_label && !(*group_label == l))
        bad_shape("HBDSoD group mixes labels");
      group_label = l;
    }
    if (objtypes > 1) bad_shape("HBDSoD binds more than one object type");
    if (objtypes == 0 && group_label->kind == ElementKind::action)
      bad_shape("HBDSoD action group needs an object type binding");
    return;
  }

  if (root.required() != 1) bad_shape("CW root must be an OR gate");
  if (root.children.size() < 2) bad_shape("CW needs at least two branches");
  auto check_leaf = [&](const TreeNode<Leaf>& n) {
    if (!n.is_leaf()) bad_shape("CW branch must be a leaf or AND of leaves");
    Label l = checked_label(label_of(n.leaf));
    if (!is_binding(l)) bad_shape("CW leaf has label " + label_name(l));
  };
  for (const auto& b : root.children) {
    if (b.is_leaf()) {
      check_leaf(b);
      continue;
    }
    if (!b.is_gate() || b.required() != b.children.size())
      bad_shape("CW branch must be a leaf or AND of leaves");
    for (const auto& l : b.children) check_leaf(l);
  }
}

std::size_t group_index(const auto& root) {
  for (std::size_t i = 0; i < root.children.size(); ++i)
    if (root.children[i].is_gate()) return i;
  return root.children.size();
}

bool matches_label(const sde::ServerEncryptedElement& cipher,
                   const std::string& label,
                   std::span<const LabeledTrapdoor> tds,
                   const sde::PublicParams& params) {
  for (const auto& t : tds)
    if (t.label == label && sde::match(cipher, t.trapdoor, params)) return true;
  return false;
}

bool record_has(const SessionRecord& record, const std::string& label,
                const sde::ServerTrapdoor& td,
                const sde::PublicParams& params) {
  for (const auto& e : record.elements)
    if (e.label == label && sde::match(e.cipher, td, params)) return true;
  return false;
}

// Leaf decisions in preorder, every leaf decided once.
std::vector<bool> leaf_decisions(const ConstraintTree& c,
                                 std::span<const LabeledTrapdoor> tds,
                                 const sde::PublicParams& params) {
  std::vector<bool> out;
  c.tree.for_each_leaf([&](const ConstraintLeaf& leaf) {
    out.push_back(matches_label(leaf.cipher, leaf.label, tds, params));
  });
  return out;
}

// HBDSoD: does `record` show a conflicting group member on the same object?
bool hbdsod_violation(const ConstraintTree& c,
                      const std::vector<bool>& decided,
                      std::span<const LabeledTrapdoor> tds,
                      const std::vector<SessionRecord>& records,
                      const sde::PublicParams& params, std::size_t& scanned) {
  const auto& root = c.tree;
  std::size_t gi = group_index(root);
  const auto& group = root.children[gi];

  // Leaves before the group occupy the first `gi` decisions.
  std::vector<const ConstraintLeaf*> probe_members;
  for (std::size_t m = 0; m < group.children.size(); ++m)
    if (c.deny_exact_repeat || !decided[gi + m])
      probe_members.push_back(&group.children[m].leaf);
  if (probe_members.empty()) return false;
  const std::string& group_label = probe_members.front()->label;

  auto request_td = [&](std::string_view label) -> const sde::ServerTrapdoor* {
    for (const auto& t : tds)
      if (t.label == label) return &t.trapdoor;
    return nullptr;
  };
  const sde::ServerTrapdoor* objtype = request_td("objtype");
  const sde::ServerTrapdoor* instance =
      c.bind_instance ? request_td("instance") : nullptr;

  std::vector<const ConstraintLeaf*> bindings;
  for (const auto& ch : root.children)
    if (ch.is_leaf() && ch.leaf.label != "objtype") bindings.push_back(&ch.leaf);

  for (const auto& record : records) {
    ++scanned;
    if (objtype && !record_has(record, "objtype", *objtype, params)) continue;
    if (instance && !record_has(record, "instance", *instance, params))
      continue;
    bool conflict = std::any_of(
        probe_members.begin(), probe_members.end(), [&](const auto* m) {
          return record_has(record, group_label, m->trapdoor, params);
        });
    if (!conflict) continue;
    bool bound = std::all_of(bindings.begin(), bindings.end(),
                             [&](const auto* b) {
                               return record_has(record, b->label, b->trapdoor,
                                                 params);
                             });
    if (bound) return true;
  }
  return false;
}

// CW: does some record satisfy a branch the request does not?
bool cw_violation(const ConstraintTree& c, const std::vector<bool>& decided,
                  const std::vector<SessionRecord>& records,
                  const sde::PublicParams& params, std::size_t& scanned) {
  std::vector<std::vector<const ConstraintLeaf*>> opposite;
  std::size_t pos = 0;
  for (const auto& branch : c.tree.children) {
    std::vector<const ConstraintLeaf*> leaves;
    bool matched = true;
    branch.for_each_leaf([&](const ConstraintLeaf& leaf) {
      if (!decided[pos++]) matched = false;
      leaves.push_back(&leaf);
    });
    if (!matched) opposite.push_back(std::move(leaves));
  }
  for (const auto& record : records) {
    ++scanned;
    for (const auto& leaves : opposite) {
      bool hit = std::all_of(leaves.begin(), leaves.end(), [&](const auto* l) {
        return record_has(record, l->label, l->trapdoor, params);
      });
      if (hit) return true;
    }
  }
  return false;
}

// Core of evaluation against one requester's records.
bool evaluate_records(const EgrantRequest& request,
                      std::span<const ConstraintTree> constraints,
                      std::vector<SessionRecord>& records,
                      const sde::KeyStore& keystore,
                      const sde::PublicParams& params, EvalTrace* trace) {
  validate_request(request);
  const auto& key = keystore.at(request.requester_id);
  EvalTrace local;
  EvalTrace& t = trace ? *trace : local;
  t = EvalTrace{};

  std::vector<LabeledTrapdoor> tds;
  tds.reserve(request.elements.size());
  for (const auto& e : request.elements)
    tds.push_back({e.label, sde::server_td(e.trapdoor, key, params)});

  for (const auto& c : constraints) {
    std::vector<bool> decided;
    bool satisfied;
    {
      CountScope scope;
      decided = leaf_decisions(c, tds, params);
      std::size_t next = 0;
      satisfied = evaluate_tree(
          c.tree, [&](const ConstraintLeaf&) { return decided[next++]; },
          EvalOptions{.short_circuit = false});
      OpCounts used = scope.elapsed();
      t.satisfiability.match += used.match;
    }
    if (!satisfied) continue;

    bool violated;
    {
      CountScope scope;
      violated = c.kind == ConstraintKind::hbdsod
                     ? hbdsod_violation(c, decided, tds, records, params,
                                        t.records_scanned)
                     : cw_violation(c, decided, records, params,
                                    t.records_scanned);
      OpCounts used = scope.elapsed();
      t.history.match += used.match;
    }
    if (violated) {
      t.violated = c.constraint_id;
      return false;
    }
  }

  SessionRecord record;
  record.elements.reserve(request.elements.size());
  for (const auto& e : request.elements)
    record.elements.push_back({e.label, sde::server_reenc(e.cipher, key, params)});
  records.push_back(std::move(record));
  return true;
}

}  // namespace

std::string_view to_string(ConstraintKind kind) {
  return kind == ConstraintKind::hbdsod ? "hbdsod" : "cw";
}

std::optional<ConstraintKind> parse_constraint_kind(std::string_view name) {
  if (name == "hbdsod") return ConstraintKind::hbdsod;
  if (name == "cw") return ConstraintKind::cw;
  return std::nullopt;
}

void validate_constraint(const ConstraintSpec& spec) {
  validate_shape(spec.kind, spec.tree, [](const LabeledValue& v) {
    if (v.value.empty()) bad_shape("empty constraint value");
    return v.label;
  });
}

ConstraintSpec make_hbdsod(const std::vector<std::string>& group,
                           const std::string& objtype,
                           const std::vector<LabeledValue>& bindings,
                           const std::string& group_label) {
  using Node = CleartextConstraintTree;
  std::vector<Node> members;
  for (const auto& g : group) members.push_back(Node::make_leaf({group_label, g}));
  std::vector<Node> children;
  children.push_back(Node::make_or(std::move(members)));
  if (!objtype.empty()) children.push_back(Node::make_leaf({"objtype", objtype}));
  for (const auto& b : bindings) children.push_back(Node::make_leaf(b));
  ConstraintSpec spec{ConstraintKind::hbdsod, Node::make_and(std::move(children))};
  validate_constraint(spec);
  return spec;
}

ConstraintSpec make_cw(const std::vector<std::vector<LabeledValue>>& branches) {
  using Node = CleartextConstraintTree;
  std::vector<Node> children;
  for (const auto& b : branches) {
    if (b.size() == 1) {
      children.push_back(Node::make_leaf(b.front()));
      continue;
    }
    std::vector<Node> leaves;
    for (const auto& v : b) leaves.push_back(Node::make_leaf(v));
    children.push_back(Node::make_and(std::move(leaves)));
  }
  ConstraintSpec spec{ConstraintKind::cw, Node::make_or(std::move(children))};
  validate_constraint(spec);
  return spec;
}

std::vector<LabeledValue> request_elements(const ConstraintRequest& request) {
  std::vector<LabeledValue> out{{"role", request.role},
                                {"action", request.action},
                                {"objtype", request.objtype},
                                {"instance", request.instance}};
  for (std::size_t d = 0; d < request.domains.size(); ++d)
    out.push_back({domain_label(static_cast<unsigned>(d + 1)),
                   request.domains[d]});
  for (const auto& e : request.context.elements())
    out.push_back({"context", e});
  return out;
}

ClientConstraint constraint_enc(const ConstraintSpec& spec,
                                const sde::ClientKeySet& admin,
                                const sde::PublicParams& params, Rng& rng) {
  validate_constraint(spec);
  ClientConstraint out;
  out.kind = spec.kind;
  out.bind_instance = spec.bind_instance;
  out.deny_exact_repeat = spec.deny_exact_repeat;
  out.tree = spec.tree.map([&](const LabeledValue& v) {
    std::string element = canonical_labeled(v.label, v.value);
    return ClientConstraintLeaf{v.label,
                                sde::client_enc(element, admin, params, rng),
                                sde::client_td(element, admin, params, rng)};
  });
  return out;
}

ConstraintTree constraint_reenc(const ClientConstraint& constraint,
                                const std::string& admin_id,
                                const sde::KeyStore& keystore,
                                const sde::PublicParams& params) {
  validate_shape(constraint.kind, constraint.tree,
                 [](const ClientConstraintLeaf& l) { return l.label; });
  const auto& key = keystore.at(admin_id);
  ConstraintTree out;
  out.kind = constraint.kind;
  out.bind_instance = constraint.bind_instance;
  out.deny_exact_repeat = constraint.deny_exact_repeat;
  out.tree = constraint.tree.map([&](const ClientConstraintLeaf& l) {
    return ConstraintLeaf{l.label, sde::server_reenc(l.cipher, key, params),
                          sde::server_td(l.trapdoor, key, params)};
  });
  return out;
}

EgrantRequest request_generate(const ConstraintRequest& request,
                               const sde::ClientKeySet& requester,
                               const sde::PublicParams& params, Rng& rng) {
  EgrantRequest out;
  out.requester_id = requester.user_id;
  for (const auto& v : request_elements(request)) {
    std::string element = canonical_labeled(v.label, v.value);
    out.elements.push_back({v.label,
                            sde::client_td(element, requester, params, rng),
                            sde::client_enc(element, requester, params, rng)});
  }
  return out;
}

void validate_request(const EgrantRequest& request) {
  std::map<std::string, int> singles{
      {"role", 0}, {"action", 0}, {"objtype", 0}, {"instance", 0}};
  std::set<unsigned> levels;
  for (const auto& e : request.elements) {
    auto label = parse_label(e.label);
    if (!label) fail(Errc::invalid_argument, "unknown label '" + e.label + "'");
    if (label->kind == ElementKind::domain) {
      if (!levels.insert(label->level).second)
        fail(Errc::invalid_argument, "repeated " + e.label);
    } else if (label->kind != ElementKind::context) {
      ++singles[e.label];
    }
  }
  for (const auto& [name, count] : singles)
    if (count != 1)
      fail(Errc::invalid_argument, "request needs exactly one " + name);
  if (!levels.empty() && *levels.rbegin() != levels.size())
    fail(Errc::invalid_argument, "domain levels must be contiguous from 1");
}

bool check_tree_satisfiability(const ConstraintTree* constraint,
                               std::span<const LabeledTrapdoor> request,
                               const sde::PublicParams& params) {
  if (!constraint) return true;
  return evaluate_tree(constraint->tree, [&](const ConstraintLeaf& leaf) {
    return matches_label(leaf.cipher, leaf.label, request, params);
  });
}

bool constraint_eval_session_up(const EgrantRequest& request,
                                std::span<const ConstraintTree> constraints,
                                AccessHistory& history,
                                const sde::KeyStore& keystore,
                                const sde::PublicParams& params,
                                EvalTrace* trace) {
  keystore.at(request.requester_id);
  auto it = history.find(request.requester_id);
  if (it != history.end())
    return evaluate_records(request, constraints, it->second, keystore, params,
                            trace);
  std::vector<SessionRecord> records;
  bool granted =
      evaluate_records(request, constraints, records, keystore, params, trace);
  if (granted) history.emplace(request.requester_id, std::move(records));
  return granted;
}

std::string ConstraintEngine::deploy(ConstraintTree constraint) {
  validate_shape(constraint.kind, constraint.tree,
                 [](const ConstraintLeaf& l) { return l.label; });
  std::unique_lock lock(constraints_mutex_);
  constraint.constraint_id = "constraint-" + std::to_string(next_id_++);
  constraints_.push_back(std::move(constraint));
  return constraints_.back().constraint_id;
}

bool ConstraintEngine::remove(const std::string& constraint_id) {
  std::unique_lock lock(constraints_mutex_);
  auto n = std::erase_if(constraints_, [&](const ConstraintTree& c) {
    return c.constraint_id == constraint_id;
  });
  return n > 0;
}

ConstraintEngine::RequesterState& ConstraintEngine::state_for(
    const std::string& requester) {
  std::lock_guard lock(requesters_mutex_);
  auto& slot = requesters_[requester];
  if (!slot) slot = std::make_unique<RequesterState>();
  return *slot;
}

bool ConstraintEngine::evaluate(const EgrantRequest& request,
                                const sde::KeyStore& keystore,
                                const sde::PublicParams& params,
                                EvalTrace* trace) {
  keystore.at(request.requester_id);
  std::shared_lock constraints_lock(constraints_mutex_);
  RequesterState& state = state_for(request.requester_id);
  std::lock_guard requester_lock(state.mutex);
  return evaluate_records(request, constraints_, state.records, keystore,
                          params, trace);
}

std::vector<ConstraintTree> ConstraintEngine::constraints() const {
  std::shared_lock lock(constraints_mutex_);
  return constraints_;
}

AccessHistory ConstraintEngine::history() const {
  std::lock_guard lock(requesters_mutex_);
  AccessHistory out;
  for (const auto& [id, state] : requesters_) {
    std::lock_guard requester_lock(state->mutex);
    if (!state->records.empty()) out.emplace(id, state->records);
  }
  return out;
}

std::vector<SessionRecord> ConstraintEngine::history_of(
    const std::string& requester) const {
  std::lock_guard lock(requesters_mutex_);
  auto it = requesters_.find(requester);
  if (it == requesters_.end()) return {};
  std::lock_guard requester_lock(it->second->mutex);
  return it->second->records;
}

std::uint64_t ConstraintEngine::next_id() const {
  std::shared_lock lock(constraints_mutex_);
  return next_id_;
}

void ConstraintEngine::restore(std::vector<ConstraintTree> constraints,
                               AccessHistory history, std::uint64_t next_id) {
  std::set<std::string> ids;
  for (const auto& c : constraints) {
    validate_shape(c.kind, c.tree,
                   [](const ConstraintLeaf& l) { return l.label; });
    if (!ids.insert(c.constraint_id).second)
      fail(Errc::parse_error, "duplicate constraint id " + c.constraint_id);
  }
  std::unique_lock constraints_lock(constraints_mutex_);
  std::lock_guard lock(requesters_mutex_);
  constraints_ = std::move(constraints);
  next_id_ = next_id;
  requesters_.clear();
  for (auto& [id, records] : history) {
    auto state = std::make_unique<RequesterState>();
    state->records = std::move(records);
    requesters_.emplace(id, std::move(state));
  }
}

}  // namespace cipherpdp::egrant
