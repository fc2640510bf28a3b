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

// Integer comparisons over the bag-of-bits encoding: an s-bit value is
// published as s patterns "name:π", each fixing one bit and wildcarding the
// rest, and a comparison compiles into an AND/OR tree over such patterns.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cipherpdp/tree.hpp"

namespace cipherpdp {

enum class CompareOp { lt, gt, le, ge, eq };

std::string_view to_string(CompareOp op);
std::optional<CompareOp> parse_compare_op(std::string_view op);

inline constexpr unsigned kMaxNumericBits = 63;

struct NumericComparison {
  std::string name;
  CompareOp op = CompareOp::eq;
  std::uint64_t value = 0;
  unsigned bits = 1;
};

// Throws Error(range_error) unless 1 <= bits <= 63 and value < 2^bits.
void check_numeric_range(std::uint64_t value, unsigned bits);

// "name:" followed by `bits` characters, all '*' except position
// `position` (0 = most significant) which is '0' or '1'.
std::string bit_pattern(std::string_view name, unsigned bits,
                        unsigned position, bool bit);

// Prefix construction. Comparisons that hold for every or no value compile
// to a constant node (e.g. >= 0, < 0).
TreeNode<std::string> compile_numeric_comparison(const NumericComparison& c);

std::vector<std::string> encode_numeric_attribute(std::string_view name,
                                                  std::uint64_t value,
                                                  unsigned bits);

bool compare(std::uint64_t lhs, CompareOp op, std::uint64_t rhs);

}  // namespace cipherpdp
