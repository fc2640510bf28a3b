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

#include "cipherpdp/wire.hpp"

#include <sys/socket.h>
#include <sys/un.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <cstring>

namespace cipherpdp::wire {

namespace {

[[noreturn]] void sys_fail(const std::string& what) {
  fail(Errc::io_error, what + ": " + std::strerror(errno));
}

sockaddr_un socket_address(const std::filesystem::path& path) {
  sockaddr_un addr{};
  addr.sun_family = AF_UNIX;
  const std::string& s = path.native();
  if (s.size() >= sizeof(addr.sun_path))
    fail(Errc::invalid_argument, "socket path too long: " + s);
  std::memcpy(addr.sun_path, s.c_str(), s.size() + 1);
  return addr;
}

void write_all(int fd, const char* data, std::size_t size) {
  while (size > 0) {
    ssize_t n = ::send(fd, data, size, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      sys_fail("send");
    }
    data += n;
    size -= static_cast<std::size_t>(n);
  }
}

// Returns the number of bytes read; short only at EOF.
std::size_t read_all(int fd, char* data, std::size_t size) {
  std::size_t done = 0;
  while (done < size) {
    ssize_t n = ::recv(fd, data + done, size - done, 0);
    if (n < 0) {
      if (errno == EINTR) continue;
      sys_fail("recv");
    }
    if (n == 0) break;
    done += static_cast<std::size_t>(n);
  }
  return done;
}

}  // namespace

void write_frame(int fd, std::string_view body) {
  if (body.size() > kMaxFrame) fail(Errc::protocol_error, "frame too large");
  auto n = static_cast<std::uint32_t>(body.size());
  std::array<char, 4> header{static_cast<char>(n >> 24),
                             static_cast<char>(n >> 16),
                             static_cast<char>(n >> 8), static_cast<char>(n)};
  write_all(fd, header.data(), header.size());
  write_all(fd, body.data(), body.size());
}

bool read_frame(int fd, std::string& body) {
  std::array<unsigned char, 4> header{};
  std::size_t got =
      read_all(fd, reinterpret_cast<char*>(header.data()), header.size());
  if (got == 0) return false;
  if (got < header.size()) fail(Errc::protocol_error, "truncated frame header");
  std::uint32_t n = (std::uint32_t{header[0]} << 24) |
                    (std::uint32_t{header[1]} << 16) |
                    (std::uint32_t{header[2]} << 8) | header[3];
  if (n > kMaxFrame) fail(Errc::protocol_error, "frame too large");
  body.resize(n);
  if (read_all(fd, body.data(), n) != n)
    fail(Errc::protocol_error, "truncated frame body");
  return true;
}

WireServer::WireServer(service::Service& service,
                       std::filesystem::path socket_path)
    : service_(service), path_(std::move(socket_path)) {}

WireServer::~WireServer() { stop(); }

void WireServer::start() {
  sockaddr_un addr = socket_address(path_);
  listen_fd_ = ::socket(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0);
  if (listen_fd_ < 0) sys_fail("socket");
  ::unlink(path_.c_str());
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0)
    sys_fail("bind " + path_.string());
  if (::listen(listen_fd_, 64) != 0) sys_fail("listen");
  running_ = true;
  acceptor_ = std::thread([this] { accept_loop(); });
}

void WireServer::accept_loop() {
  while (running_) {
    int fd = ::accept4(listen_fd_, nullptr, nullptr, SOCK_CLOEXEC);
    if (fd < 0) {
      if (errno == EINTR) continue;
      break;  // listener shut down
    }
    std::lock_guard lock(connections_mutex_);
    if (!running_) {
      ::close(fd);
      break;
    }
    connections_.insert(fd);
    workers_.emplace_back([this, fd] { serve_connection(fd); });
  }
}

void WireServer::serve_connection(int fd) {
  try {
    std::string body;
    while (read_frame(fd, body)) {
      Json response;
      try {
        response = service_.handle_envelope(parse_json(body));
      } catch (const Error& e) {
        response = service::error_response(Errc::protocol_error, "", e.what());
      }
      write_frame(fd, response.dump());
    }
  } catch (const Error&) {
    // Peer went away mid-frame; drop the connection.
  }
  std::lock_guard lock(connections_mutex_);
  if (connections_.erase(fd)) ::close(fd);
}

void WireServer::stop() {
  if (!running_.exchange(false)) return;
  ::shutdown(listen_fd_, SHUT_RDWR);
  ::close(listen_fd_);
  if (acceptor_.joinable()) acceptor_.join();
  std::vector<std::thread> workers;
  {
    std::lock_guard lock(connections_mutex_);
    for (int fd : connections_) ::shutdown(fd, SHUT_RDWR);
    workers.swap(workers_);
  }
  for (auto& w : workers) w.join();
  std::lock_guard lock(connections_mutex_);
  for (int fd : connections_) ::close(fd);
  connections_.clear();
  ::unlink(path_.c_str());
}

WireClient::WireClient(const std::filesystem::path& socket_path) {
  sockaddr_un addr = socket_address(socket_path);
  fd_ = ::socket(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0);
  if (fd_ < 0) sys_fail("socket");
  if (::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
    int saved = errno;
    ::close(fd_);
    errno = saved;
    sys_fail("connect " + socket_path.string());
  }
}

WireClient::~WireClient() {
  if (fd_ >= 0) ::close(fd_);
}

Json WireClient::call(std::string_view verb, const Json& payload) {
  write_frame(fd_, Json{{"verb", verb}, {"payload", payload}}.dump());
  std::string body;
  if (!read_frame(fd_, body))
    fail(Errc::protocol_error, "server closed the connection");
  return parse_json(body);
}

}  // namespace cipherpdp::wire
