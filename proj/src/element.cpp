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

#include "cipherpdp/element.hpp"

#include <charconv>

#include "cipherpdp/error.hpp"

namespace cipherpdp {

namespace {

std::string_view kind_prefix(ElementKind kind) {
  switch (kind) {
    case ElementKind::subject: return "subject";
    case ElementKind::action: return "action";
    case ElementKind::target: return "target";
    case ElementKind::role: return "role";
    case ElementKind::object: return "object";
    case ElementKind::instance: return "instance";
    case ElementKind::domain: return "domain";
    case ElementKind::context: return "context";
  }
  return "context";
}

}  // namespace

std::string canonical_element(ElementKind kind, std::string_view value,
                              unsigned level) {
  if (value.empty()) fail(Errc::invalid_argument, "empty element value");
  std::string out(kind_prefix(kind));
  if (kind == ElementKind::domain) {
    if (level == 0) fail(Errc::invalid_argument, "domain level starts at 1");
    out += std::to_string(level);
  }
  out += '|';
  out += value;
  return out;
}

std::optional<Label> parse_label(std::string_view label) {
  if (label == "role") return Label{ElementKind::role};
  if (label == "action") return Label{ElementKind::action};
  if (label == "objtype") return Label{ElementKind::object};
  if (label == "instance") return Label{ElementKind::instance};
  if (label == "context") return Label{ElementKind::context};
  constexpr std::string_view kDomain = "domain-";
  if (label.substr(0, kDomain.size()) == kDomain) {
    auto digits = label.substr(kDomain.size());
    unsigned level = 0;
    auto [ptr, ec] =
        std::from_chars(digits.data(), digits.data() + digits.size(), level);
    if (ec == std::errc() && ptr == digits.data() + digits.size() &&
        level >= 1 && digits.front() != '0')
      return Label{ElementKind::domain, level};
  }
  return std::nullopt;
}

std::string label_name(const Label& label) {
  switch (label.kind) {
    case ElementKind::role: return "role";
    case ElementKind::action: return "action";
    case ElementKind::object: return "objtype";
    case ElementKind::instance: return "instance";
    case ElementKind::context: return "context";
    case ElementKind::domain: return domain_label(label.level);
    default: break;
  }
  fail(Errc::invalid_argument, "element kind has no label");
}

std::string canonical_labeled(std::string_view label, std::string_view value) {
  auto parsed = parse_label(label);
  if (!parsed)
    fail(Errc::invalid_argument, "unknown label '" + std::string(label) + "'");
  return canonical_element(parsed->kind, value, parsed->level);
}

}  // namespace cipherpdp
