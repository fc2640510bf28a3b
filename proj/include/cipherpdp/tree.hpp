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

// Condition and constraint trees: leaves carry a payload whose type changes
// with the deployment phase (cleartext string, client ciphertext, server
// ciphertext, ciphertext plus trapdoor); inner nodes are k-of-n gates.

#include <cstddef>
#include <optional>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include "cipherpdp/error.hpp"

namespace cipherpdp {

enum class Gate { and_gate, or_gate, threshold };

std::string_view to_string(Gate gate);
std::optional<Gate> parse_gate(std::string_view name);

template <class Leaf>
struct TreeNode {
  enum class Kind { leaf, gate, constant };

  Kind kind = Kind::constant;
  Gate gate = Gate::and_gate;
  std::size_t k = 0;  // only meaningful for Gate::threshold
  std::vector<TreeNode> children;
  Leaf leaf{};
  bool constant = true;

  static TreeNode make_leaf(Leaf payload) {
    TreeNode n;
    n.kind = Kind::leaf;
    n.leaf = std::move(payload);
    return n;
  }
  static TreeNode make_gate(Gate gate, std::vector<TreeNode> children,
                            std::size_t k = 0) {
    TreeNode n;
    n.kind = Kind::gate;
    n.gate = gate;
    n.children = std::move(children);
    n.k = gate == Gate::threshold ? k : 0;
    return n;
  }
  static TreeNode make_and(std::vector<TreeNode> children) {
    return make_gate(Gate::and_gate, std::move(children));
  }
  static TreeNode make_or(std::vector<TreeNode> children) {
    return make_gate(Gate::or_gate, std::move(children));
  }
  static TreeNode make_threshold(std::size_t k, std::vector<TreeNode> children) {
    return make_gate(Gate::threshold, std::move(children), k);
  }
  static TreeNode make_constant(bool value) {
    TreeNode n;
    n.kind = Kind::constant;
    n.constant = value;
    return n;
  }

  bool is_leaf() const { return kind == Kind::leaf; }
  bool is_gate() const { return kind == Kind::gate; }
  bool is_constant() const { return kind == Kind::constant; }

  // Number of true children a gate needs: n for AND, 1 for OR, k otherwise.
  std::size_t required() const {
    switch (gate) {
      case Gate::and_gate: return children.size();
      case Gate::or_gate: return 1;
      case Gate::threshold: return k;
    }
    return k;
  }

  std::size_t leaf_count() const {
    if (is_leaf()) return 1;
    std::size_t n = 0;
    for (const auto& c : children) n += c.leaf_count();
    return n;
  }

  std::size_t node_count() const {
    std::size_t n = 1;
    for (const auto& c : children) n += c.node_count();
    return n;
  }

  template <class F>
  void for_each_leaf(F&& f) const {
    if (is_leaf()) {
      f(leaf);
      return;
    }
    for (const auto& c : children) c.for_each_leaf(f);
  }

  // Same shape, every leaf payload replaced by f(payload).
  template <class F>
  auto map(F&& f) const -> TreeNode<std::decay_t<std::invoke_result_t<F&, const Leaf&>>> {
    using Out = std::decay_t<std::invoke_result_t<F&, const Leaf&>>;
    TreeNode<Out> out;
    out.kind = static_cast<typename TreeNode<Out>::Kind>(kind);
    out.gate = gate;
    out.k = k;
    out.constant = constant;
    if (is_leaf()) out.leaf = f(leaf);
    out.children.reserve(children.size());
    for (const auto& c : children) out.children.push_back(c.map(f));
    return out;
  }

  bool operator==(const TreeNode&) const = default;
};

// Gates need at least one child and 1 <= k <= n; leaves and constants have
// no children. Throws Error(invalid_argument).
template <class Leaf>
void validate_structure(const TreeNode<Leaf>& node) {
  if (!node.is_gate()) {
    if (!node.children.empty())
      fail(Errc::invalid_argument, "leaf node with children");
    return;
  }
  if (node.children.empty()) fail(Errc::invalid_argument, "gate without children");
  if (node.gate == Gate::threshold &&
      (node.k < 1 || node.k > node.children.size()))
    fail(Errc::invalid_argument, "threshold outside 1..n");
  for (const auto& c : node.children) validate_structure(c);
}

// Removes constant markers by boolean absorption. The result is either a
// single constant or a tree free of constants.
template <class Leaf>
TreeNode<Leaf> simplify(const TreeNode<Leaf>& node) {
  if (!node.is_gate()) return node;
  std::vector<TreeNode<Leaf>> kept;
  std::size_t need = node.required();
  for (const auto& c : node.children) {
    TreeNode<Leaf> s = simplify(c);
    if (s.is_constant()) {
      if (s.constant && need > 0) --need;
      continue;
    }
    kept.push_back(std::move(s));
  }
  if (need == 0) return TreeNode<Leaf>::make_constant(true);
  if (need > kept.size()) return TreeNode<Leaf>::make_constant(false);
  if (kept.size() == 1) return std::move(kept.front());
  if (need == kept.size()) return TreeNode<Leaf>::make_and(std::move(kept));
  if (need == 1) return TreeNode<Leaf>::make_or(std::move(kept));
  return TreeNode<Leaf>::make_threshold(need, std::move(kept));
}

struct EvalOptions {
  // Stop deciding children once the gate's outcome is fixed.
  bool short_circuit = true;
};

// Decisions by preorder node index; nullopt for nodes never decided.
using DecisionTrace = std::vector<std::optional<bool>>;

namespace detail {

template <class Leaf, class Decider>
bool evaluate_node(const TreeNode<Leaf>& node, Decider& decide,
                   const EvalOptions& options, std::size_t& index,
                   DecisionTrace* trace) {
  std::size_t self = index++;
  bool decision = false;
  if (node.is_constant()) {
    decision = node.constant;
  } else if (node.is_leaf()) {
    decision = static_cast<bool>(decide(node.leaf));
  } else {
    const std::size_t n = node.children.size();
    const std::size_t need = node.required();
    std::size_t yes = 0;
    std::size_t no = 0;
    std::size_t i = 0;
    for (; i < n; ++i) {
      if (options.short_circuit && (yes >= need || no > n - need)) break;
      if (evaluate_node(node.children[i], decide, options, index, trace))
        ++yes;
      else
        ++no;
    }
    for (; i < n; ++i) index += node.children[i].node_count();
    decision = yes >= need;
  }
  if (trace) (*trace)[self] = decision;
  return decision;
}

}  // namespace detail

// k-of-n evaluation: leaves are decided by `decide(leaf)`, a gate is true iff
// at least required() children are true.
template <class Leaf, class Decider>
bool evaluate_tree(const TreeNode<Leaf>& root, Decider&& decide,
                   EvalOptions options = {}, DecisionTrace* trace = nullptr) {
  if (trace) trace->assign(root.node_count(), std::nullopt);
  std::size_t index = 0;
  return detail::evaluate_node(root, decide, options, index, trace);
}

}  // namespace cipherpdp
