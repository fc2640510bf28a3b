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

// Cleartext authorization policies: `if <cond> then can <S, A, T>`.
//
// Conditions are written as nested and(...), or(...), kofn(k, ...) over
// string predicates `name=value` and numeric predicates `name op v#s`
// (op one of < > <= >= =, s the bit width). Numeric predicates compile to
// bag-of-bits trees.

#include <optional>
#include <string>
#include <string_view>

#include "cipherpdp/tree.hpp"

namespace cipherpdp {

using ConditionTree = TreeNode<std::string>;

struct SatTuple {
  std::string subject;
  std::string action;
  std::string target;

  bool operator==(const SatTuple&) const = default;
};

struct PolicySpec {
  SatTuple tuple;
  // Absent means unconditional.
  std::optional<ConditionTree> condition;
};

// Throws Error(parse_error) on malformed input.
ConditionTree parse_condition(std::string_view text);
PolicySpec parse_policy(std::string_view text);

// Validates, absorbs constants; a condition that always holds becomes
// nullopt, one that never holds stays a constant-false node.
std::optional<ConditionTree> normalize_condition(const ConditionTree& tree);

}  // namespace cipherpdp
