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

#include "mppsi/session.h"

#include <algorithm>
#include <random>
#include <set>
#include <string>

#include "gtest/gtest.h"
#include "mppsi/fixtures.h"

namespace mppsi {
namespace {

ProtocolInstance RandomInstance(std::mt19937_64& rng, int max_m,
                                uint64_t max_k, int max_n) {
  const int m = 2 + rng() % (max_m - 1);
  const uint64_t k = 1 + rng() % max_k;
  ProtocolInstance inst{Universe(k), {}};
  for (int i = 1; i <= m; ++i) {
    ElementSet s;
    for (ElementId e = 1; e <= k; ++e) {
      if (rng() % 3) s.push_back(e);
    }
    inst.parties.emplace_back(i, 2 + rng() % (max_n - 1), s);
  }
  return inst;
}

TEST(SessionTest, WorkedExamples) {
  for (const auto& f : {Sec4Fixture(), Sec71Fixture(), Sec72Fixture()}) {
    const auto s = PrepareSession(f.instance, f.leader, 2024);
    const auto t = RunInMemory(s);
    EXPECT_EQ(t.result.intersection, f.expected_intersection) << f.name;
    EXPECT_EQ(t.download_cost_actual(), f.expected_cost) << f.name;
    EXPECT_EQ(t.result.download_cost, f.expected_cost) << f.name;
    EXPECT_NO_THROW(CheckTranscript(t));
  }
}

TEST(SessionTest, HeterogeneousCostTableKeepsDiscrepancy) {
  const auto f = Sec72Fixture();
  const auto s = PrepareSession(f.instance, f.leader, 1);
  EXPECT_EQ(s.leader, 4);
  EXPECT_EQ(s.table.Cost(2), 14u);
  EXPECT_EQ(s.table.Cost(4), 15u);
  const auto elected = PrepareSession(f.instance, std::nullopt, 1);
  EXPECT_EQ(elected.leader, 2);
  const auto t = RunInMemory(elected);
  EXPECT_EQ(t.result.intersection, f.expected_intersection);
  EXPECT_EQ(t.download_cost_actual(), 14u);
}

TEST(SessionTest, RandomInstancesDecodeAndCost) {
  std::mt19937_64 rng(99);
  for (int iter = 0; iter < 300; ++iter) {
    const auto inst = RandomInstance(rng, 5, 8, 6);
    const auto s = PrepareSession(inst, std::nullopt, iter);
    const auto t = RunInMemory(s);
    EXPECT_EQ(t.result.intersection, BruteForceIntersection(inst.parties));
    EXPECT_EQ(t.download_cost_actual(), *s.table.Cost(s.leader));
    EXPECT_NO_THROW(CheckTranscript(t));
  }
}

// The leader's endpoint never appears in the sharing phase.
TEST(SessionTest, Topology) {
  const auto f = Sec72Fixture();
  const auto t = RunInMemory(PrepareSession(f.instance, f.leader, 5));
  std::set<Endpoint> queried, answered;
  for (const auto& m : t.messages) {
    if (m.phase == Phase::kRandomness) {
      EXPECT_NE(m.origin.party, 4);
      EXPECT_NE(m.dest.party, 4);
    } else {
      EXPECT_TRUE(m.origin.party == 4 || m.dest.party == 4);
    }
    if (m.type == MessageType::kQuery) queried.insert(m.dest);
    if (m.type == MessageType::kAnswer) answered.insert(m.origin);
  }
  EXPECT_EQ(queried, answered);
  EXPECT_EQ(queried.size(), 2u + 3u + 4u);
}

TEST(SessionTest, TranscriptIsDeterministic) {
  const auto f = Sec72Fixture();
  const auto s = PrepareSession(f.instance, f.leader, 42);
  const std::string first = TranscriptToJson(RunInMemory(s));
  for (int i = 0; i < 5; ++i) {
    EXPECT_EQ(TranscriptToJson(RunInMemory(PrepareSession(f.instance, f.leader, 42))),
              first);
  }
  EXPECT_NE(TranscriptToJson(RunInMemory(PrepareSession(f.instance, f.leader, 43))),
            first);
}

TEST(SessionTest, EmptyLeaderSetShortCircuits) {
  ProtocolInstance inst{Universe(3),
                        {PartyProfile(1, 2, {1, 2}), PartyProfile(2, 2, {})}};
  const auto s = PrepareSession(inst, std::nullopt, 0);
  EXPECT_EQ(s.leader, 2);
  const auto t = RunInMemory(s);
  EXPECT_TRUE(t.messages.empty());
  EXPECT_TRUE(t.result.intersection.empty());
  EXPECT_EQ(t.download_cost_actual(), 0u);
}

TEST(SessionTest, InfeasibleLeaders) {
  ProtocolInstance inst{Universe(3),
                        {PartyProfile(1, 1, {1}), PartyProfile(2, 2, {1})}};
  try {
    PrepareSession(inst, 2, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInfeasible);
  }
  EXPECT_EQ(PrepareSession(inst, std::nullopt, 0).leader, 1);
  ProtocolInstance none{Universe(3),
                        {PartyProfile(1, 1, {1}), PartyProfile(2, 1, {1})}};
  EXPECT_THROW(PrepareSession(none, std::nullopt, 0), Error);
}

TEST(SessionTest, BrokenCorrelationLosesReliability) {
  const auto f = Sec4Fixture();
  const auto s = PrepareSession(f.instance, f.leader, 0);
  SchemeVariant v;
  v.break_correlation = true;
  SeededRandomness source(0, s.field);
  const auto t = RunInMemory(s, source, VariantBaseVectors(s, v), v);
  EXPECT_NE(t.result.intersection, f.expected_intersection);
}

TEST(SessionTest, CheckTranscriptCatchesBreaches) {
  const auto f = Sec4Fixture();
  const auto good = RunInMemory(PrepareSession(f.instance, f.leader, 1));
  auto expect_breach = [](const SessionTranscript& t) {
    try {
      CheckTranscript(t);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kProtocolViolation);
    }
  };
  auto reordered = good;
  std::swap(reordered.messages.front(), reordered.messages.back());
  expect_breach(reordered);
  auto dropped = good;
  dropped.messages.pop_back();
  expect_breach(dropped);
  auto leaked = good;
  leaked.messages.front().dest = {3, 0};
  expect_breach(leaked);
}

}  // namespace
}  // namespace mppsi
