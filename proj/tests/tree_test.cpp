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

#include "cipherpdp/tree.hpp"

#include <gtest/gtest.h>

#include <random>

namespace cipherpdp {
namespace {

using Node = TreeNode<int>;

// Random tree with at most `depth` levels and up to 3 children per gate;
// leaves carry distinct ids.
Node random_tree(std::mt19937& gen, int depth, int& next_leaf) {
  std::uniform_int_distribution<int> coin(0, 2);
  if (depth <= 1 || coin(gen) == 0) return Node::make_leaf(next_leaf++);
  std::uniform_int_distribution<int> width(1, 3);
  int n = width(gen);
  std::vector<Node> children;
  for (int i = 0; i < n; ++i)
    children.push_back(random_tree(gen, depth - 1, next_leaf));
  switch (coin(gen)) {
    case 0:
      return Node::make_and(std::move(children));
    case 1:
      return Node::make_or(std::move(children));
    default: {
      std::uniform_int_distribution<int> k(1, n);
      return Node::make_threshold(k(gen), std::move(children));
    }
  }
}

// Rewrites AND/OR gates as thresholds with the same requirement.
Node as_thresholds(const Node& n) {
  if (!n.is_gate()) return n;
  std::vector<Node> children;
  for (const auto& c : n.children) children.push_back(as_thresholds(c));
  return Node::make_threshold(n.required(), std::move(children));
}

TEST(TreeTest, RequiredChildren) {
  auto leaves = std::vector<Node>{Node::make_leaf(1), Node::make_leaf(2),
                                  Node::make_leaf(3)};
  EXPECT_EQ(Node::make_and(leaves).required(), 3u);
  EXPECT_EQ(Node::make_or(leaves).required(), 1u);
  EXPECT_EQ(Node::make_threshold(2, leaves).required(), 2u);
}

TEST(TreeTest, SingleLeafWithTrueDecider) {
  EXPECT_TRUE(evaluate_tree(Node::make_leaf(0), [](int) { return true; }));
}

TEST(TreeTest, ThresholdCountsTrueChildren) {
  auto t = Node::make_threshold(
      2, {Node::make_leaf(1), Node::make_leaf(2), Node::make_leaf(3)});
  EXPECT_TRUE(evaluate_tree(t, [](int id) { return id != 2; }));
  EXPECT_FALSE(evaluate_tree(t, [](int id) { return id == 2; }));
}

TEST(TreeTest, ShortCircuitSkipsDecidedChildren) {
  auto t = Node::make_or({Node::make_leaf(1), Node::make_leaf(2),
                          Node::make_and({Node::make_leaf(3), Node::make_leaf(4)})});
  int calls = 0;
  DecisionTrace trace;
  EXPECT_TRUE(evaluate_tree(t, [&](int) { ++calls; return true; }, {}, &trace));
  EXPECT_EQ(calls, 1);
  ASSERT_EQ(trace.size(), 6u);
  EXPECT_EQ(trace[0], true);
  EXPECT_EQ(trace[1], true);
  EXPECT_FALSE(trace[2].has_value());
  EXPECT_FALSE(trace[5].has_value());

  calls = 0;
  EXPECT_TRUE(evaluate_tree(t, [&](int) { ++calls; return true; },
                            EvalOptions{.short_circuit = false}, &trace));
  EXPECT_EQ(calls, 4);
  for (const auto& d : trace) EXPECT_TRUE(d.has_value());
}

TEST(TreeTest, AndOrEqualThresholdsOnRandomTrees) {
  std::mt19937 gen(7);
  for (int round = 0; round < 500; ++round) {
    int leaves = 0;
    Node t = random_tree(gen, 4, leaves);
    Node th = as_thresholds(t);
    for (int mask = 0; mask < 64; ++mask) {
      auto decide = [&](int id) { return ((mask >> (id % 6)) & 1) != 0; };
      ASSERT_EQ(evaluate_tree(t, decide), evaluate_tree(th, decide));
    }
  }
}

TEST(TreeTest, ShortCircuitIsSound) {
  std::mt19937 gen(11);
  for (int round = 0; round < 500; ++round) {
    int leaves = 0;
    Node t = random_tree(gen, 4, leaves);
    for (int mask = 0; mask < 64; ++mask) {
      auto decide = [&](int id) { return ((mask >> (id % 6)) & 1) != 0; };
      ASSERT_EQ(evaluate_tree(t, decide, {.short_circuit = true}),
                evaluate_tree(t, decide, {.short_circuit = false}));
    }
  }
}

TEST(TreeTest, SimplifyAbsorbsConstants) {
  auto t = Node::make_and({Node::make_constant(true), Node::make_leaf(1)});
  EXPECT_EQ(simplify(t), Node::make_leaf(1));
  auto f = Node::make_and({Node::make_constant(false), Node::make_leaf(1)});
  EXPECT_EQ(simplify(f), Node::make_constant(false));
  auto o = Node::make_or({Node::make_constant(true), Node::make_leaf(1)});
  EXPECT_EQ(simplify(o), Node::make_constant(true));
  auto k = Node::make_threshold(
      2, {Node::make_constant(true), Node::make_leaf(1), Node::make_leaf(2)});
  EXPECT_EQ(simplify(k), Node::make_or({Node::make_leaf(1), Node::make_leaf(2)}));
}

TEST(TreeTest, SimplifyPreservesSemantics) {
  std::mt19937 gen(13);
  for (int round = 0; round < 300; ++round) {
    int leaves = 0;
    Node t = random_tree(gen, 4, leaves);
    // Swap some leaves for constants.
    Node with_constants = t.map([](int id) { return id; });
    std::function<void(Node&)> sprinkle = [&](Node& n) {
      if (n.is_leaf() && n.leaf % 4 == 3) n = Node::make_constant(n.leaf % 8 == 3);
      for (auto& c : n.children) sprinkle(c);
    };
    sprinkle(with_constants);
    Node s = simplify(with_constants);
    for (int mask = 0; mask < 64; ++mask) {
      auto decide = [&](int id) { return ((mask >> (id % 6)) & 1) != 0; };
      ASSERT_EQ(evaluate_tree(with_constants, decide), evaluate_tree(s, decide));
    }
  }
}

TEST(TreeTest, MapPreservesShape) {
  auto t = Node::make_threshold(
      2, {Node::make_leaf(1), Node::make_or({Node::make_leaf(2), Node::make_leaf(3)}),
          Node::make_leaf(4)});
  auto s = t.map([](int id) { return std::to_string(id * 10); });
  EXPECT_EQ(s.leaf_count(), 4u);
  EXPECT_EQ(s.node_count(), t.node_count());
  EXPECT_EQ(s.children[1].children[1].leaf, "30");
  EXPECT_EQ(s.k, 2u);
}

TEST(TreeTest, ValidateStructure) {
  EXPECT_THROW(validate_structure(Node::make_and({})), Error);
  EXPECT_THROW(validate_structure(Node::make_threshold(3, {Node::make_leaf(1)})),
               Error);
  EXPECT_THROW(validate_structure(Node::make_threshold(0, {Node::make_leaf(1)})),
               Error);
  EXPECT_NO_THROW(validate_structure(Node::make_or({Node::make_leaf(1)})));
}

TEST(TreeTest, GateNames) {
  EXPECT_EQ(parse_gate("and"), Gate::and_gate);
  EXPECT_EQ(parse_gate("kofn"), Gate::threshold);
  EXPECT_FALSE(parse_gate("xor"));
  EXPECT_EQ(to_string(Gate::or_gate), "or");
}

}  // namespace
}  // namespace cipherpdp
