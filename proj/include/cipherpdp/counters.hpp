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

namespace cipherpdp {

// Per-thread tallies of the searchable-encryption primitives. Used by tests
// and the service's instrumented responses to check complexity bounds.
struct OpCounts {
  std::uint64_t client_enc = 0;
  std::uint64_t server_reenc = 0;
  std::uint64_t client_td = 0;
  std::uint64_t server_td = 0;
  std::uint64_t match = 0;

  OpCounts operator-(const OpCounts& other) const {
    return {client_enc - other.client_enc, server_reenc - other.server_reenc,
            client_td - other.client_td, server_td - other.server_td,
            match - other.match};
  }
  bool operator==(const OpCounts&) const = default;
};

OpCounts& thread_op_counts();

// Captures the calling thread's counters at construction.
class CountScope {
 public:
  CountScope() : start_(thread_op_counts()) {}
  OpCounts elapsed() const { return thread_op_counts() - start_; }

 private:
  OpCounts start_;
};

}  // namespace cipherpdp
