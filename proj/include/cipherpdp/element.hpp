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

#include <optional>
#include <string>
#include <string_view>

namespace cipherpdp {

// Every element is encrypted as "<kind>|<value>" so that values from
// different roles never collide (a role named "read" is not the action
// "read").
enum class ElementKind {
  subject,
  action,
  target,
  role,
  object,
  instance,
  domain,
  context,
};

// `level` is only used for ElementKind::domain (levels start at 1).
std::string canonical_element(ElementKind kind, std::string_view value,
                              unsigned level = 0);

// Constraint and history labels: "role", "action", "objtype", "instance",
// "domain-<d>" (d >= 1) and "context".
struct Label {
  ElementKind kind;
  unsigned level = 0;

  bool operator==(const Label&) const = default;
};

std::optional<Label> parse_label(std::string_view label);
std::string label_name(const Label& label);

inline std::string domain_label(unsigned level) {
  return "domain-" + std::to_string(level);
}

// canonical_element for a labelled value; throws on an unknown label.
std::string canonical_labeled(std::string_view label, std::string_view value);

}  // namespace cipherpdp
