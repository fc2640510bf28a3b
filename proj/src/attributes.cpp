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

#include "cipherpdp/attributes.hpp"

#include <charconv>

#include "cipherpdp/error.hpp"
#include "cipherpdp/numeric.hpp"

namespace cipherpdp {

namespace {

template <class T>
bool parse_number(std::string_view text, T& out) {
  if (text.empty()) return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

}  // namespace

void AttributeSet::claim(const std::string& name) const {
  if (name.empty()) fail(Errc::invalid_argument, "empty attribute name");
  if (strings_.count(name) || numerics_.count(name))
    fail(Errc::duplicate_attribute,
         "attribute '" + name + "' given more than once");
}

void AttributeSet::add_string(const std::string& name,
                              const std::string& value) {
  claim(name);
  if (value.empty()) fail(Errc::invalid_argument, "empty attribute value");
  strings_.emplace(name, value);
}

void AttributeSet::add_numeric(const std::string& name, std::uint64_t value,
                               unsigned bits) {
  claim(name);
  check_numeric_range(value, bits);
  numerics_.emplace(name, NumericValue{value, bits});
}

void AttributeSet::add(std::string_view assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0)
    fail(Errc::parse_error,
         "attribute must be name=value: '" + std::string(assignment) + "'");
  std::string name(assignment.substr(0, eq));
  std::string_view value = assignment.substr(eq + 1);
  auto hash = value.find('#');
  std::uint64_t number = 0;
  unsigned bits = 0;
  if (hash != std::string_view::npos &&
      parse_number(value.substr(0, hash), number) &&
      parse_number(value.substr(hash + 1), bits)) {
    add_numeric(name, number, bits);
  } else {
    add_string(name, std::string(value));
  }
}

AttributeSet AttributeSet::parse(const std::vector<std::string>& assignments) {
  AttributeSet out;
  for (const auto& a : assignments) out.add(a);
  return out;
}

std::vector<std::string> AttributeSet::elements() const {
  std::vector<std::string> out;
  for (const auto& [name, value] : strings_) out.push_back(name + "=" + value);
  for (const auto& [name, n] : numerics_) {
    auto bits = encode_numeric_attribute(name, n.value, n.bits);
    out.insert(out.end(), bits.begin(), bits.end());
  }
  return out;
}

}  // namespace cipherpdp
