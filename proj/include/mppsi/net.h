// Copyright 2026 The mppsi Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "mppsi/client.h"
#include "mppsi/message.h"
#include "mppsi/session.h"

namespace mppsi {

// Owning POSIX file descriptor.
class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  Socket(Socket&& o) noexcept : fd_(std::exchange(o.fd_, -1)) {}
  Socket& operator=(Socket&& o) noexcept;
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;
  ~Socket() { Close(); }

  int fd() const { return fd_; }
  bool valid() const { return fd_ >= 0; }
  void Close();
  // Unblocks any thread waiting on the socket.
  void Shutdown();

 private:
  int fd_ = -1;
};

// Connects to "host:port", retrying until `timeout_ms` elapses. Throws
// kTransport on failure.
Socket ConnectTo(const std::string& address, int timeout_ms = 10000);
void WriteFrame(const Socket& s, const Message& m);
// Throws kTransport on a closed or failed connection, kDecode on a bad frame.
Message ReadFrame(const Socket& s);

// The orchestrator's own endpoint on control connections.
inline constexpr Endpoint kDriverEndpoint{0, 0};

// One client database served over TCP. Connections are classified by their
// first frame: "start" opens the driver's control connection, share
// messages come from peer databases, queries come from the leader.
class EndpointServer {
 public:
  // Binds `listen` ("host:port"; port 0 picks a free one).
  EndpointServer(const PreparedSession& session, Endpoint self,
                 const std::string& listen);
  ~EndpointServer();

  EndpointServer(const EndpointServer&) = delete;
  EndpointServer& operator=(const EndpointServer&) = delete;

  const Endpoint& self() const { return self_; }
  std::string address() const;

  // Addresses of the other client databases, needed before "start".
  void SetPeers(std::map<Endpoint, std::string> peers);
  void Start();
  // Blocks until the driver ends the session or the endpoint fails. Returns
  // the failure, if any.
  std::optional<Error> Wait();
  void Stop();

 private:
  void AcceptLoop();
  void Serve(Socket conn);
  void ServeControl(Socket& conn, const Message& first);
  void ServePeer(Socket& conn, Message first);
  void ServeLeader(Socket& conn, Message first);
  void CheckSession(const Message& m) const;
  void Finish(std::optional<Error> failure);

  PreparedSession session_;
  Endpoint self_;
  std::string host_;
  uint16_t port_ = 0;
  Socket listener_;
  std::map<Endpoint, std::string> peers_;

  std::mutex mu_;  // guards db_ and connections_
  ClientDatabase db_;
  std::vector<int> connections_;

  std::thread acceptor_;
  std::vector<std::thread> handlers_;
  std::mutex done_mu_;
  std::condition_variable done_cv_;
  bool done_ = false;
  std::optional<Error> failure_;
  std::atomic<bool> stopping_{false};
};

// Runs the session over loopback TCP. With `endpoints` empty every client
// database is served in-process on an ephemeral port; otherwise the
// databases are expected to be served (e.g. by `mppsi serve`) at the given
// addresses. Connections are retried for `connect_timeout_ms` to let
// separately started servers come up. Throws kTransport on connection
// failures.
SessionTranscript RunNetworked(const PreparedSession& s,
                               const std::map<Endpoint, std::string>& endpoints,
                               int connect_timeout_ms = 10000);

}  // namespace mppsi
