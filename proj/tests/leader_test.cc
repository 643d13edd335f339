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

#include "mppsi/leader.h"

#include <algorithm>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "mppsi/fixtures.h"

namespace mppsi {
namespace {

std::vector<PartyProfile> Clients(const ProtocolInstance& inst, PartyId t) {
  std::vector<PartyProfile> out;
  for (const auto& p : inst.parties) {
    if (p.id() != t) out.push_back(p);
  }
  return out;
}

// Independent oracle: integer ceiling via floating-free loop.
uint64_t OracleCost(const std::vector<PartyProfile>& parties, PartyId t) {
  uint64_t total = 0;
  const uint64_t r = parties[t - 1].cardinality();
  for (const auto& p : parties) {
    if (p.id() == t) continue;
    const uint64_t num = r * p.num_databases(), den = p.num_databases() - 1;
    uint64_t q = 0;
    while (q * den < num) ++q;
    total += q;
  }
  return total;
}

TEST(CostTableTest, HeterogeneousExample) {
  const auto f = Sec72Fixture();
  const auto table = ComputeCostTable(f.instance.parties);
  ASSERT_EQ(table.num_parties(), 4);
  EXPECT_EQ(table.Cost(1), 17u);
  EXPECT_EQ(table.Cost(2), 14u);
  EXPECT_EQ(table.Cost(3), 15u);
  EXPECT_EQ(table.Cost(4), 15u);
  EXPECT_EQ(ElectLeader(f.instance.parties).leader, 2);
}

TEST(CostTableTest, TiesGoToLowestId) {
  const auto f = Sec4Fixture();
  const auto e = ElectLeader(f.instance.parties);
  EXPECT_EQ(e.leader, 1);
  for (PartyId t = 1; t <= 3; ++t) EXPECT_EQ(e.table.Cost(t), 6u);
  EXPECT_EQ(DownloadCost(f.instance.Party(3), Clients(f.instance, 3)), 6u);
  const auto g = Sec71Fixture();
  EXPECT_EQ(DownloadCost(g.instance.Party(3), Clients(g.instance, 3)), 8u);
}

TEST(CostTableTest, SingleDatabaseCounterparts) {
  std::vector<PartyProfile> parties = {PartyProfile(1, 1, {1}),
                                       PartyProfile(2, 2, {1, 2}),
                                       PartyProfile(3, 2, {1})};
  const auto e = ElectLeader(parties);
  EXPECT_EQ(e.leader, 1);
  EXPECT_FALSE(e.table.Cost(2).has_value());
  EXPECT_FALSE(e.table.Cost(3).has_value());

  std::vector<PartyProfile> none = {PartyProfile(1, 1, {1}),
                                    PartyProfile(2, 1, {1})};
  try {
    ElectLeader(none);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::kInfeasible);
  }
  std::vector<PartyProfile> alone = {PartyProfile(1, 2, {1})};
  try {
    ElectLeader(alone);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::kInvalidPartyCount);
  }
}

TEST(CostTableTest, RandomInstancesMatchOracle) {
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 500; ++iter) {
    const int m = 2 + rng() % 4;
    std::vector<PartyProfile> parties;
    for (int i = 1; i <= m; ++i) {
      ElementSet s;
      for (ElementId e = 1; e <= 8; ++e) {
        if (rng() % 2) s.push_back(e);
      }
      parties.emplace_back(i, 2 + rng() % 5, s);
    }
    const auto e = ElectLeader(parties);
    for (PartyId t = 1; t <= m; ++t) {
      EXPECT_EQ(*e.table.Cost(t), OracleCost(parties, t));
      EXPECT_LE(*e.table.Cost(e.leader), *e.table.Cost(t));
      if (t < e.leader) EXPECT_LT(*e.table.Cost(e.leader), *e.table.Cost(t));
    }
  }
}

// Rebuilds the chunking directly from the sorted leader set.
TEST(ClientLayoutTest, ChunksMatchDirectConstruction) {
  for (int n = 2; n <= 7; ++n) {
    for (uint32_t r = 0; r <= 11; ++r) {
      ClientLayout layout(1, n, r);
      const uint32_t chunk = n - 1;
      std::vector<std::vector<uint32_t>> chunks;
      for (uint32_t k = 1; k <= r; ++k) {
        if ((k - 1) % chunk == 0) chunks.emplace_back();
        chunks.back().push_back(k);
      }
      ASSERT_EQ(layout.num_partitions(), chunks.size());
      EXPECT_EQ(layout.used_databases(), std::min<int>(n, r + 1));
      for (uint32_t l = 1; l <= chunks.size(); ++l) {
        EXPECT_EQ(layout.PartitionSize(l), chunks[l - 1].size());
        for (size_t pos = 0; pos < chunks[l - 1].size(); ++pos) {
          const uint32_t k = chunks[l - 1][pos];
          const auto slot = layout.SlotOf(k);
          EXPECT_EQ(slot.partition, l);
          EXPECT_EQ(slot.database, static_cast<int>(pos) + 2);
          EXPECT_EQ(layout.RankAt(l, pos + 2), k);
        }
        EXPECT_FALSE(layout.RankAt(l, 1).has_value());
      }
    }
  }
  EXPECT_THROW(ClientLayout(1, 1, 3), Error);
}

TEST(PartitionPlanTest, HeterogeneousExample) {
  const auto f = Sec72Fixture();
  const auto plan =
      MakePartitionPlan(f.instance.Party(4), Clients(f.instance, 4));
  ASSERT_EQ(plan.clients.size(), 3u);
  EXPECT_EQ(plan.kappa(), 3u);
  EXPECT_EQ(plan.partitions[0],
            (std::vector<ElementSet>{{1}, {4}, {5}}));
  EXPECT_EQ(plan.partitions[1], (std::vector<ElementSet>{{1, 4}, {5}}));
  EXPECT_EQ(plan.partitions[2], (std::vector<ElementSet>{{1, 4, 5}}));
  EXPECT_EQ(plan.clients[2].used_databases(), 4);
}

TEST(QueryPlanTest, StructureAndCost) {
  const auto f = Sec72Fixture();
  const PrimeField field(5);
  const auto plan =
      MakePartitionPlan(f.instance.Party(4), Clients(f.instance, 4));
  const auto qp = GenerateQueries(plan, field, f.instance.universe, 11);
  ASSERT_EQ(qp.base_vectors.size(), 3u);
  EXPECT_EQ(qp.queries.size(), 15u);
  for (const auto& q : qp.queries) {
    const auto& h = qp.base_vectors[q.partition - 1];
    ASSERT_EQ(q.vector.size(), 5u);
    for (size_t k = 0; k < 5; ++k) {
      const bool bumped = q.element && *q.element == k + 1;
      EXPECT_EQ(q.vector[k], bumped ? h[k] + field.One() : h[k]);
    }
    EXPECT_EQ(q.rank.has_value(), q.dest.database != 1);
    if (q.rank) EXPECT_EQ(plan.ElementAt(*q.rank), *q.element);
  }
  const auto msgs = QueryMessages(qp, 4, 99);
  ASSERT_EQ(msgs.size(), qp.queries.size());
  for (size_t s = 0; s < msgs.size(); ++s) {
    EXPECT_EQ(msgs[s].origin, (Endpoint{4, 0}));
    EXPECT_EQ(msgs[s].session_id, 99u);
    EXPECT_EQ(msgs[s].target, qp.queries[s].rank);
  }
  // Same seed, same queries.
  const auto again = GenerateQueries(plan, field, f.instance.universe, 11);
  EXPECT_EQ(again.base_vectors, qp.base_vectors);
}

TEST(QueryPlanTest, CostEqualsQueryCountOnRandomInstances) {
  std::mt19937_64 rng(3);
  for (int iter = 0; iter < 300; ++iter) {
    const int m = 2 + rng() % 4;
    ProtocolInstance inst{Universe(8), {}};
    for (int i = 1; i <= m; ++i) {
      ElementSet s;
      for (ElementId e = 1; e <= 8; ++e) {
        if (rng() % 2) s.push_back(e);
      }
      inst.parties.emplace_back(i, 2 + rng() % 5, s);
    }
    const auto e = ElectLeader(inst.parties);
    const auto clients = Clients(inst, e.leader);
    const auto plan = MakePartitionPlan(inst.Party(e.leader), clients);
    const auto field = SelectFieldSize(m);
    const auto qp = GenerateQueries(plan, field, inst.universe, iter);
    EXPECT_EQ(qp.queries.size(), *e.table.Cost(e.leader));
    uint64_t eta_sum = 0;
    for (const auto& c : plan.clients) eta_sum += c.num_partitions();
    EXPECT_EQ(qp.queries.size(),
              eta_sum + plan.clients.size() * plan.leader_set_size());
  }
}

TEST(DecoderTest, AnswerOrderAndCompleteness) {
  const auto f = Sec71Fixture();
  const PrimeField field(3);
  const auto plan =
      MakePartitionPlan(f.instance.Party(3), Clients(f.instance, 3));
  const auto qp = GenerateQueries(plan, field, f.instance.universe, 5);
  // Answers with every Z equal to 1 except client 1 rank 1, which is 1 too:
  // E = 2 for each rank.
  std::vector<AnswerValue> answers;
  for (const auto& q : qp.queries) {
    answers.push_back(AnswerValue{q.dest, q.partition, q.rank,
                                  q.rank ? field.One() : field.Zero()});
  }
  const Decoder dec(plan, qp, field);
  const auto base = dec.Decode(answers);
  EXPECT_TRUE(base.intersection.empty());
  ASSERT_EQ(base.indicators.size(), 2u);
  EXPECT_EQ(base.indicators[0].first, 1u);
  EXPECT_EQ(base.indicators[1].first, 4u);
  EXPECT_EQ(base.indicators[0].second.value(), 2u);
  EXPECT_EQ(base.download_cost, 8u);

  auto shuffled = answers;
  std::reverse(shuffled.begin(), shuffled.end());
  EXPECT_EQ(dec.Decode(shuffled), base);

  auto missing = answers;
  missing.pop_back();
  try {
    dec.Decode(missing);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kProtocolViolation);
  }
  auto dup = answers;
  dup.back() = dup.front();
  EXPECT_THROW(dec.Decode(dup), Error);
  auto stray = answers;
  stray.back().partition = 9;
  EXPECT_THROW(dec.Decode(stray), Error);
}

TEST(DecoderTest, EmptyLeaderSet) {
  std::vector<PartyProfile> clients = {PartyProfile(1, 2, {1})};
  const auto plan = MakePartitionPlan(PartyProfile(2, 2, {}), clients);
  const PrimeField field(2);
  const auto qp = GenerateQueries(plan, field, Universe(2), 0);
  EXPECT_TRUE(qp.queries.empty());
  const auto result = Decoder(plan, qp, field).DecodeAligned({});
  EXPECT_TRUE(result.intersection.empty());
  EXPECT_EQ(result.download_cost, 0u);
}

}  // namespace
}  // namespace mppsi
