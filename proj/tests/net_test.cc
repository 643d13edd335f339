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

#include <sys/socket.h>

#include <algorithm>
#include <random>

#include "gtest/gtest.h"
#include "mppsi/fixtures.h"

namespace mppsi {
namespace {

std::vector<Message> Sorted(std::vector<Message> v) {
  std::sort(v.begin(), v.end());
  return v;
}

TEST(NetTest, MatchesInMemoryOnWorkedExamples) {
  for (const auto& f : {Sec4Fixture(), Sec71Fixture(), Sec72Fixture()}) {
    const auto s = PrepareSession(f.instance, f.leader, 11);
    const auto mem = RunInMemory(s);
    const auto net = RunNetworked(s, {});
    EXPECT_EQ(net.result, mem.result) << f.name;
    EXPECT_EQ(Sorted(net.messages), Sorted(mem.messages)) << f.name;
    EXPECT_NO_THROW(CheckTranscript(net));
  }
}

TEST(NetTest, RandomInstances) {
  std::mt19937_64 rng(5);
  for (int iter = 0; iter < 10; ++iter) {
    const int m = 2 + rng() % 3;
    ProtocolInstance inst{Universe(5), {}};
    for (int i = 1; i <= m; ++i) {
      ElementSet s;
      for (ElementId e = 1; e <= 5; ++e) {
        if (rng() % 2) s.push_back(e);
      }
      inst.parties.emplace_back(i, 2 + rng() % 4, s);
    }
    const auto s = PrepareSession(inst, std::nullopt, iter);
    const auto net = RunNetworked(s, {});
    EXPECT_EQ(net.result.intersection, BruteForceIntersection(inst.parties));
    EXPECT_EQ(TranscriptToJson(net), TranscriptToJson(RunInMemory(s)));
  }
}

TEST(NetTest, UnreachableEndpoint) {
  const auto f = Sec4Fixture();
  const auto s = PrepareSession(f.instance, f.leader, 1);
  std::map<Endpoint, std::string> addrs;
  for (const auto& db : s.ctx.Databases()) addrs[db] = "127.0.0.1:1";
  try {
    RunNetworked(s, addrs, 200);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTransport);
  }
}

TEST(NetTest, ServerRejectsForeignSession) {
  const auto f = Sec4Fixture();
  const auto s = PrepareSession(f.instance, f.leader, 1);
  EndpointServer server(s, {1, 1}, "127.0.0.1:0");
  server.Start();
  Socket c = ConnectTo(server.address());
  Message start;
  start.type = MessageType::kStart;
  start.phase = Phase::kControl;
  start.session_id = s.session_id + 1;
  start.origin = kDriverEndpoint;
  start.dest = {1, 1};
  WriteFrame(c, start);
  const Message reply = ReadFrame(c);
  EXPECT_EQ(reply.type, MessageType::kError);
  const auto failure = server.Wait();
  ASSERT_TRUE(failure.has_value());
  EXPECT_EQ(failure->code(), ErrorCode::kProtocolViolation);
  server.Stop();
}

TEST(NetTest, FrameCodecOverSocket) {
  const auto f = Sec4Fixture();
  const auto s = PrepareSession(f.instance, f.leader, 1);
  EndpointServer server(s, {1, 1}, "127.0.0.1:0");
  server.Start();
  Socket c = ConnectTo(server.address());
  const uint8_t junk[] = {0, 0, 0, 0};
  ::send(c.fd(), junk, 4, 0);
  const auto failure = server.Wait();
  ASSERT_TRUE(failure.has_value());
  EXPECT_EQ(failure->code(), ErrorCode::kDecode);
  server.Stop();
}

}  // namespace
}  // namespace mppsi
