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

#include "mppsi/net.h"

#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <sys/time.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <exception>

#include "mppsi/rng.h"
#include "mppsi/wire.h"

namespace mppsi {
namespace {

constexpr int kIoTimeoutSeconds = 30;

[[noreturn]] void TransportError(const std::string& what) {
  Throw(ErrorCode::kTransport, what + ": " + std::strerror(errno));
}

std::pair<std::string, std::string> SplitAddress(const std::string& a) {
  const auto colon = a.rfind(':');
  if (colon == std::string::npos) {
    Throw(ErrorCode::kConfig, "address '" + a + "' lacks a port");
  }
  return {a.substr(0, colon), a.substr(colon + 1)};
}

addrinfo* Resolve(const std::string& address, bool passive) {
  const auto [host, port] = SplitAddress(address);
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  if (passive) hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  if (int rc = getaddrinfo(host.c_str(), port.c_str(), &hints, &res); rc != 0) {
    Throw(ErrorCode::kTransport,
          "cannot resolve " + address + ": " + gai_strerror(rc));
  }
  return res;
}

void Tune(int fd) {
  int one = 1;
  setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  timeval tv{kIoTimeoutSeconds, 0};
  setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
  setsockopt(fd, SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof(tv));
}

void SendAll(int fd, const uint8_t* data, size_t n) {
  while (n > 0) {
    const ssize_t w = send(fd, data, n, MSG_NOSIGNAL);
    if (w < 0) {
      if (errno == EINTR) continue;
      TransportError("send failed");
    }
    data += w;
    n -= static_cast<size_t>(w);
  }
}

void RecvExact(int fd, uint8_t* data, size_t n) {
  while (n > 0) {
    const ssize_t r = recv(fd, data, n, 0);
    if (r == 0) Throw(ErrorCode::kTransport, "connection closed by peer");
    if (r < 0) {
      if (errno == EINTR) continue;
      TransportError("receive failed");
    }
    data += r;
    n -= static_cast<size_t>(r);
  }
}

Message Control(MessageType type, uint64_t session, Endpoint from,
                Endpoint to) {
  Message m;
  m.type = type;
  m.session_id = session;
  m.phase = Phase::kControl;
  m.origin = from;
  m.dest = to;
  return m;
}

Error ErrorFromFrame(const Message& m) {
  ErrorCode code = ErrorCode::kProtocolViolation;
  if (m.values.size() == 1 &&
      m.values[0] <= static_cast<uint64_t>(ErrorCode::kBoundExceeded)) {
    code = static_cast<ErrorCode>(m.values[0]);
  }
  return Error(code, ToString(m.origin) + " reported a " +
                         ErrorCodeName(code) + " error");
}

// Reads the next frame, turning a peer's error frame into an exception.
Message Expect(const Socket& s) {
  Message m = ReadFrame(s);
  if (m.type == MessageType::kError) throw ErrorFromFrame(m);
  return m;
}

void ExpectType(const Message& m, MessageType type, const char* during) {
  if (m.type != type) {
    Throw(ErrorCode::kProtocolViolation,
          std::string("expected ") + MessageTypeName(type) + " during " +
              during + ", got " + MessageTypeName(m.type) + " from " +
              ToString(m.origin));
  }
}

}  // namespace

Socket& Socket::operator=(Socket&& o) noexcept {
  if (this != &o) {
    Close();
    fd_ = std::exchange(o.fd_, -1);
  }
  return *this;
}

void Socket::Close() {
  if (fd_ >= 0) ::close(fd_);
  fd_ = -1;
}

void Socket::Shutdown() {
  if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
}

Socket ConnectTo(const std::string& address, int timeout_ms) {
  const auto deadline =
      std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
  addrinfo* res = Resolve(address, false);
  std::unique_ptr<addrinfo, decltype(&freeaddrinfo)> guard(res, freeaddrinfo);
  while (true) {
    Socket s(::socket(res->ai_family, res->ai_socktype, res->ai_protocol));
    if (!s.valid()) TransportError("socket failed");
    if (::connect(s.fd(), res->ai_addr, res->ai_addrlen) == 0) {
      Tune(s.fd());
      return s;
    }
    if (std::chrono::steady_clock::now() >= deadline) {
      TransportError("cannot connect to " + address);
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
}

void WriteFrame(const Socket& s, const Message& m) {
  const auto frame = EncodeMsg(m);
  SendAll(s.fd(), frame.data(), frame.size());
}

Message ReadFrame(const Socket& s) {
  uint8_t header[4];
  RecvExact(s.fd(), header, 4);
  const uint32_t n = FrameLength(std::span<const uint8_t, 4>(header, 4));
  std::string body(n, '\0');
  RecvExact(s.fd(), reinterpret_cast<uint8_t*>(body.data()), n);
  return DecodeBody(body);
}

EndpointServer::EndpointServer(const PreparedSession& session, Endpoint self,
                               const std::string& listen)
    : session_(session),
      self_(self),
      db_(session.ctx, session.leader, self, session.Data(self.party)) {
  addrinfo* res = Resolve(listen, true);
  std::unique_ptr<addrinfo, decltype(&freeaddrinfo)> guard(res, freeaddrinfo);
  listener_ = Socket(::socket(res->ai_family, res->ai_socktype, 0));
  if (!listener_.valid()) TransportError("socket failed");
  int one = 1;
  setsockopt(listener_.fd(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  if (::bind(listener_.fd(), res->ai_addr, res->ai_addrlen) != 0) {
    TransportError("cannot bind " + listen);
  }
  if (::listen(listener_.fd(), 64) != 0) TransportError("listen failed");
  sockaddr_in bound{};
  socklen_t len = sizeof(bound);
  getsockname(listener_.fd(), reinterpret_cast<sockaddr*>(&bound), &len);
  port_ = ntohs(bound.sin_port);
  host_ = SplitAddress(listen).first;
}

EndpointServer::~EndpointServer() { Stop(); }

std::string EndpointServer::address() const {
  return host_ + ":" + std::to_string(port_);
}

void EndpointServer::SetPeers(std::map<Endpoint, std::string> peers) {
  peers_ = std::move(peers);
}

void EndpointServer::Start() {
  acceptor_ = std::thread([this] { AcceptLoop(); });
}

std::optional<Error> EndpointServer::Wait() {
  std::unique_lock lock(done_mu_);
  done_cv_.wait(lock, [this] { return done_; });
  return failure_;
}

void EndpointServer::Stop() {
  if (stopping_.exchange(true)) return;
  listener_.Shutdown();
  {
    std::lock_guard lock(mu_);
    for (int fd : connections_) ::shutdown(fd, SHUT_RDWR);
  }
  if (acceptor_.joinable()) acceptor_.join();
  for (auto& t : handlers_) {
    if (t.joinable()) t.join();
  }
  listener_.Close();
  Finish(std::nullopt);
}

void EndpointServer::Finish(std::optional<Error> failure) {
  std::lock_guard lock(done_mu_);
  if (done_) return;
  done_ = true;
  failure_ = std::move(failure);
  done_cv_.notify_all();
}

void EndpointServer::AcceptLoop() {
  while (!stopping_) {
    const int fd = ::accept(listener_.fd(), nullptr, nullptr);
    if (fd < 0) {
      if (errno == EINTR) continue;
      return;  // listener shut down
    }
    Tune(fd);
    std::lock_guard lock(mu_);
    if (stopping_) {
      ::close(fd);
      return;
    }
    connections_.push_back(fd);
    handlers_.emplace_back([this, fd] { Serve(Socket(fd)); });
  }
}

void EndpointServer::CheckSession(const Message& m) const {
  if (m.session_id != session_.session_id) {
    Throw(ErrorCode::kProtocolViolation,
          ToString(self_) + ": frame from " + ToString(m.origin) +
              " carries a foreign session id");
  }
  if (!(m.dest == self_)) {
    Throw(ErrorCode::kProtocolViolation,
          ToString(self_) + ": frame addressed to " + ToString(m.dest));
  }
}

void EndpointServer::Serve(Socket conn) {
  const int fd = conn.fd();
  try {
    Message first = ReadFrame(conn);
    CheckSession(first);
    switch (first.phase) {
      case Phase::kControl:
        ServeControl(conn, first);
        break;
      case Phase::kRandomness:
        ServePeer(conn, std::move(first));
        break;
      case Phase::kQuery:
        ServeLeader(conn, std::move(first));
        break;
      default:
        Throw(ErrorCode::kProtocolViolation,
              ToString(self_) + ": unexpected opening frame");
    }
  } catch (const Error& e) {
    if (!stopping_) {
      Message err = Control(MessageType::kError, session_.session_id, self_,
                            kDriverEndpoint);
      err.values = {static_cast<uint64_t>(e.code())};
      try {
        WriteFrame(conn, err);
      } catch (const Error&) {
      }
      Finish(e);
    }
  }
  std::lock_guard lock(mu_);
  std::erase(connections_, fd);
}

void EndpointServer::ServeControl(Socket& conn, const Message& first) {
  ExpectType(first, MessageType::kStart, "session start");
  std::vector<Message> shares;
  {
    SeededRandomness source(session_.seed, session_.field);
    std::lock_guard lock(mu_);
    shares = db_.Emit(source);
  }
  std::map<Endpoint, std::vector<const Message*>> by_dest;
  for (const auto& m : shares) by_dest[m.dest].push_back(&m);
  for (const auto& [dest, msgs] : by_dest) {
    auto it = peers_.find(dest);
    if (it == peers_.end()) {
      Throw(ErrorCode::kConfig, "no address for " + ToString(dest));
    }
    Socket peer = ConnectTo(it->second);
    for (const Message* m : msgs) WriteFrame(peer, *m);
    WriteFrame(peer,
               Control(MessageType::kEnd, session_.session_id, self_, dest));
    ExpectType(Expect(peer), MessageType::kAck, "share delivery");
  }
  for (const auto& m : shares) WriteFrame(conn, m);
  WriteFrame(conn, Control(MessageType::kAck, session_.session_id, self_,
                           kDriverEndpoint));

  Message seal = Expect(conn);
  CheckSession(seal);
  ExpectType(seal, MessageType::kSeal, "sealing");
  {
    std::lock_guard lock(mu_);
    db_.Seal();
  }
  WriteFrame(conn, Control(MessageType::kAck, session_.session_id, self_,
                           kDriverEndpoint));

  Message end = Expect(conn);
  CheckSession(end);
  ExpectType(end, MessageType::kEnd, "session end");
  WriteFrame(conn, Control(MessageType::kAck, session_.session_id, self_,
                           kDriverEndpoint));
  Finish(std::nullopt);
}

void EndpointServer::ServePeer(Socket& conn, Message first) {
  Message m = std::move(first);
  while (m.type != MessageType::kEnd) {
    if (m.phase != Phase::kRandomness) {
      Throw(ErrorCode::kProtocolViolation,
            ToString(self_) + ": non-share frame on a peer connection");
    }
    {
      std::lock_guard lock(mu_);
      db_.Accept(m);
    }
    m = Expect(conn);
    CheckSession(m);
  }
  WriteFrame(conn, Control(MessageType::kAck, session_.session_id, self_,
                           m.origin));
}

void EndpointServer::ServeLeader(Socket& conn, Message first) {
  Message m = std::move(first);
  while (m.type != MessageType::kEnd) {
    Message answer = [&] {
      std::lock_guard lock(mu_);
      return db_.Respond(m);
    }();
    WriteFrame(conn, answer);
    m = Expect(conn);
    CheckSession(m);
  }
  WriteFrame(conn, Control(MessageType::kEnd, session_.session_id, self_,
                           m.origin));
}

namespace {

// Leader side: sends every query for one database, then collects answers.
std::vector<Message> QueryDatabase(const std::string& address,
                                   const std::vector<Message>& queries,
                                   const PreparedSession& s, Endpoint db,
                                   int timeout_ms) {
  Socket conn = ConnectTo(address, timeout_ms);
  const Endpoint leader{s.leader, 0};
  for (const auto& q : queries) WriteFrame(conn, q);
  WriteFrame(conn, Control(MessageType::kEnd, s.session_id, leader, db));
  std::vector<Message> answers;
  while (true) {
    Message m = Expect(conn);
    if (m.session_id != s.session_id) {
      Throw(ErrorCode::kProtocolViolation, "answer with foreign session id");
    }
    if (m.type == MessageType::kEnd) break;
    ExpectType(m, MessageType::kAnswer, "answer collection");
    answers.push_back(std::move(m));
  }
  return answers;
}

SessionTranscript Drive(const PreparedSession& s,
                        const std::map<Endpoint, std::string>& addresses,
                        int timeout_ms) {
  SessionTranscript t;
  t.session_id = s.session_id;
  t.modulus = s.field.modulus();
  t.leader = s.leader;
  t.table = s.table;
  if (s.plan.leader_set.empty()) return t;

  const auto dbs = s.ctx.Databases();
  for (const auto& db : dbs) {
    if (!addresses.count(db)) {
      Throw(ErrorCode::kConfig, "no endpoint address for " + ToString(db));
    }
  }
  // Randomness phase, driven over one control connection per database.
  std::map<Endpoint, Socket> control;
  for (const auto& db : dbs) {
    Socket c = ConnectTo(addresses.at(db), timeout_ms);
    WriteFrame(c, Control(MessageType::kStart, s.session_id, kDriverEndpoint,
                          db));
    control.emplace(db, std::move(c));
  }
  for (const auto& db : dbs) {
    while (true) {
      Message m = Expect(control.at(db));
      if (m.type == MessageType::kAck) break;
      if (m.phase != Phase::kRandomness || !(m.origin == db)) {
        Throw(ErrorCode::kProtocolViolation,
              "unexpected frame from " + ToString(db) + " while sharing");
      }
      t.messages.push_back(std::move(m));
    }
  }
  for (const auto& db : dbs) {
    WriteFrame(control.at(db), Control(MessageType::kSeal, s.session_id,
                                       kDriverEndpoint, db));
  }
  for (const auto& db : dbs) {
    ExpectType(Expect(control.at(db)), MessageType::kAck, "sealing");
  }

  // Single query round, all databases concurrently.
  const QueryPlan qp = GenerateQueries(s.plan, s.field, s.instance.universe,
                                       s.seed);
  const auto queries = QueryMessages(qp, s.leader, s.session_id);
  std::map<Endpoint, std::vector<Message>> per_db;
  for (const auto& q : queries) per_db[q.dest].push_back(q);
  std::map<Endpoint, std::vector<Message>> answers;
  std::map<Endpoint, std::exception_ptr> errors;
  for (const auto& [db, qs] : per_db) {
    answers[db];
    errors[db];
  }
  std::vector<std::thread> workers;
  for (const auto& [db, qs] : per_db) {
    workers.emplace_back([&, db = db] {
      try {
        answers.at(db) = QueryDatabase(addresses.at(db), per_db.at(db), s, db,
                                       timeout_ms);
      } catch (...) {
        errors.at(db) = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (const auto& [db, e] : errors) {
    if (e) std::rethrow_exception(e);
  }

  for (const auto& db : dbs) {
    WriteFrame(control.at(db), Control(MessageType::kEnd, s.session_id,
                                       kDriverEndpoint, db));
    ExpectType(Expect(control.at(db)), MessageType::kAck, "session end");
  }

  // Decode in arrival order; log answers in query order.
  const Decoder decoder(s.plan, qp, s.field);
  std::vector<AnswerValue> values;
  std::vector<std::optional<Message>> by_slot(qp.queries.size());
  for (auto& [db, list] : answers) {
    for (auto& a : list) {
      auto v = AnswerFromMessage(a, s.field);
      if (auto slot = decoder.SlotOf(v.origin, v.partition, v.rank)) {
        by_slot[*slot] = a;
      }
      values.push_back(std::move(v));
    }
  }
  t.result = decoder.Decode(values);
  for (const auto& q : queries) t.messages.push_back(q);
  for (auto& a : by_slot) t.messages.push_back(std::move(*a));
  return t;
}

}  // namespace

SessionTranscript RunNetworked(
    const PreparedSession& s,
    const std::map<Endpoint, std::string>& endpoints,
    int connect_timeout_ms) {
  if (!endpoints.empty()) return Drive(s, endpoints, connect_timeout_ms);
  if (s.plan.leader_set.empty()) return Drive(s, {}, connect_timeout_ms);

  std::vector<std::unique_ptr<EndpointServer>> servers;
  std::map<Endpoint, std::string> addresses;
  for (const auto& db : s.ctx.Databases()) {
    servers.push_back(std::make_unique<EndpointServer>(s, db, "127.0.0.1:0"));
    addresses[db] = servers.back()->address();
  }
  for (auto& srv : servers) {
    srv->SetPeers(addresses);
    srv->Start();
  }
  SessionTranscript t;
  try {
    t = Drive(s, addresses, connect_timeout_ms);
  } catch (...) {
    for (auto& srv : servers) srv->Stop();
    throw;
  }
  for (auto& srv : servers) {
    if (auto failure = srv->Wait()) throw *failure;
  }
  return t;
}

}  // namespace mppsi
