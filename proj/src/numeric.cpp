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

#include "cipherpdp/numeric.hpp"

#include "cipherpdp/error.hpp"

namespace cipherpdp {

namespace {

using StringTree = TreeNode<std::string>;

bool bit_at(std::uint64_t value, unsigned bits, unsigned position) {
  return (value >> (bits - 1 - position)) & 1u;
}

StringTree collapse(Gate gate, std::vector<StringTree> children) {
  if (children.size() == 1) return std::move(children.front());
  return StringTree::make_gate(gate, std::move(children));
}

// One branch per position where v has bit `pivot`: the higher bits agree
// with v and that position takes the opposite bit.
StringTree prefix_branches(const std::string& name, std::uint64_t value,
                           unsigned bits, bool pivot) {
  std::vector<StringTree> branches;
  for (unsigned i = 0; i < bits; ++i) {
    if (bit_at(value, bits, i) != pivot) continue;
    std::vector<StringTree> leaves;
    for (unsigned j = 0; j < i; ++j)
      leaves.push_back(
          StringTree::make_leaf(bit_pattern(name, bits, j, bit_at(value, bits, j))));
    leaves.push_back(StringTree::make_leaf(bit_pattern(name, bits, i, !pivot)));
    branches.push_back(collapse(Gate::and_gate, std::move(leaves)));
  }
  if (branches.empty()) return StringTree::make_constant(false);
  return collapse(Gate::or_gate, std::move(branches));
}

}  // namespace

std::string_view to_string(CompareOp op) {
  switch (op) {
    case CompareOp::lt: return "<";
    case CompareOp::gt: return ">";
    case CompareOp::le: return "<=";
    case CompareOp::ge: return ">=";
    case CompareOp::eq: return "=";
  }
  return "=";
}

std::optional<CompareOp> parse_compare_op(std::string_view op) {
  if (op == "<") return CompareOp::lt;
  if (op == ">") return CompareOp::gt;
  if (op == "<=" || op == "≤") return CompareOp::le;
  if (op == ">=" || op == "≥") return CompareOp::ge;
  if (op == "=") return CompareOp::eq;
  return std::nullopt;
}

void check_numeric_range(std::uint64_t value, unsigned bits) {
  if (bits < 1 || bits > kMaxNumericBits)
    fail(Errc::range_error, "bit width must be in 1..63");
  if (value >> bits)
    fail(Errc::range_error, std::to_string(value) + " does not fit in " +
                                std::to_string(bits) + " bits");
}

std::string bit_pattern(std::string_view name, unsigned bits,
                        unsigned position, bool bit) {
  std::string out(name);
  out += ':';
  out.append(bits, '*');
  out[name.size() + 1 + position] = bit ? '1' : '0';
  return out;
}

std::vector<std::string> encode_numeric_attribute(std::string_view name,
                                                  std::uint64_t value,
                                                  unsigned bits) {
  check_numeric_range(value, bits);
  std::vector<std::string> out;
  out.reserve(bits);
  for (unsigned i = 0; i < bits; ++i)
    out.push_back(bit_pattern(name, bits, i, bit_at(value, bits, i)));
  return out;
}

StringTree compile_numeric_comparison(const NumericComparison& c) {
  check_numeric_range(c.value, c.bits);
  if (c.name.empty()) fail(Errc::invalid_argument, "empty attribute name");
  const std::uint64_t top = (std::uint64_t{1} << c.bits) - 1;
  switch (c.op) {
    case CompareOp::gt:
      return prefix_branches(c.name, c.value, c.bits, false);
    case CompareOp::lt:
      return prefix_branches(c.name, c.value, c.bits, true);
    case CompareOp::ge:
      if (c.value == 0) return StringTree::make_constant(true);
      return prefix_branches(c.name, c.value - 1, c.bits, false);
    case CompareOp::le:
      if (c.value == top) return StringTree::make_constant(true);
      return prefix_branches(c.name, c.value + 1, c.bits, true);
    case CompareOp::eq: {
      std::vector<StringTree> leaves;
      for (auto& p : encode_numeric_attribute(c.name, c.value, c.bits))
        leaves.push_back(StringTree::make_leaf(std::move(p)));
      return collapse(Gate::and_gate, std::move(leaves));
    }
  }
  fail(Errc::invalid_argument, "unknown comparison");
}

bool compare(std::uint64_t lhs, CompareOp op, std::uint64_t rhs) {
  switch (op) {
    case CompareOp::lt: return lhs < rhs;
    case CompareOp::gt: return lhs > rhs;
    case CompareOp::le: return lhs <= rhs;
    case CompareOp::ge: return lhs >= rhs;
    case CompareOp::eq: return lhs == rhs;
  }
  return false;
}

}  // namespace cipherpdp
