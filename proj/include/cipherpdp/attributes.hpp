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

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace cipherpdp {

struct NumericValue {
  std::uint64_t value = 0;
  unsigned bits = 1;

  bool operator==(const NumericValue&) const = default;
};

// Contextual information about a request: string attributes "name=value"
// and numeric attributes published in bag-of-bits form. One value per name.
class AttributeSet {
 public:
  // Both throw Error(duplicate_attribute) when `name` is already set.
  void add_string(const std::string& name, const std::string& value);
  void add_numeric(const std::string& name, std::uint64_t value,
                   unsigned bits);
  // "name=value" or "name=<v>#<s>".
  void add(std::string_view assignment);

  static AttributeSet parse(const std::vector<std::string>& assignments);

  // "name=value" for strings, then the bit patterns of every numeric.
  std::vector<std::string> elements() const;

  bool empty() const { return strings_.empty() && numerics_.empty(); }
  const std::map<std::string, std::string>& strings() const { return strings_; }
  const std::map<std::string, NumericValue>& numerics() const {
    return numerics_;
  }

  bool operator==(const AttributeSet&) const = default;

 private:
  void claim(const std::string& name) const;

  std::map<std::string, std::string> strings_;
  std::map<std::string, NumericValue> numerics_;
};

}  // namespace cipherpdp
