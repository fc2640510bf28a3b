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

namespace cipherpdp {

std::string_view to_string(Gate gate) {
  switch (gate) {
    case Gate::and_gate: return "and";
    case Gate::or_gate: return "or";
    case Gate::threshold: return "kofn";
  }
  return "and";
}

std::optional<Gate> parse_gate(std::string_view name) {
  if (name == "and") return Gate::and_gate;
  if (name == "or") return Gate::or_gate;
  if (name == "kofn") return Gate::threshold;
  return std::nullopt;
}

}  // namespace cipherpdp
