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

#include "cipherpdp/error.hpp"

namespace cipherpdp {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::generation_failed: return "generation-failed";
    case Errc::user_not_found: return "user-not-found";
    case Errc::invalid_hierarchy: return "invalid-hierarchy";
    case Errc::invalid_constraint: return "invalid-constraint";
    case Errc::range_error: return "range-error";
    case Errc::already_issued: return "already-issued";
    case Errc::protocol_error: return "protocol-error";
    case Errc::parse_error: return "parse-error";
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::duplicate_attribute: return "duplicate-attribute";
    case Errc::not_found: return "not-found";
    case Errc::io_error: return "io-error";
  }
  return "unknown";
}

}  // namespace cipherpdp
