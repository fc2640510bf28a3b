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

// Local wire protocol: every frame is a 4-byte big-endian length followed by
// a JSON document. Requests are {"verb", "payload"}; each request gets one
// response frame. Transport is a Unix domain stream socket.

#include <atomic>
#include <filesystem>
#include <mutex>
#include <set>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "cipherpdp/service.hpp"

namespace cipherpdp::wire {

inline constexpr std::size_t kMaxFrame = 64u << 20;

// Both throw Error(io_error); read_frame returns false on a clean EOF
// before the first byte.
void write_frame(int fd, std::string_view body);
bool read_frame(int fd, std::string& body);

class WireServer {
 public:
  WireServer(service::Service& service, std::filesystem::path socket_path);
  ~WireServer();

  WireServer(const WireServer&) = delete;
  WireServer& operator=(const WireServer&) = delete;

  // Binds and starts accepting on a background thread.
  void start();
  // Closes the listener and every connection, then joins all threads.
  void stop();

 private:
  void accept_loop();
  void serve_connection(int fd);

  service::Service& service_;
  std::filesystem::path path_;
  int listen_fd_ = -1;
  std::atomic<bool> running_{false};
  std::thread acceptor_;
  std::mutex connections_mutex_;
  std::set<int> connections_;
  std::vector<std::thread> workers_;
};

class WireClient {
 public:
  explicit WireClient(const std::filesystem::path& socket_path);
  ~WireClient();

  WireClient(const WireClient&) = delete;
  WireClient& operator=(const WireClient&) = delete;

  Json call(std::string_view verb, const Json& payload);

 private:
  int fd_ = -1;
};

}  // namespace cipherpdp::wire
