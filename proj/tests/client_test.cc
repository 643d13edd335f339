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

#include "mppsi/client.h"

#include <map>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "mppsi/fixtures.h"

namespace mppsi {
namespace {

struct Run {
  PartitionPlan plan;
  QueryPlan qp;
  ShareContext ctx;
  std::vector<ClientDatabase> dbs;
  std::vector<Message> queries;
  std::vector<Message> answers;
  IntersectionResult result;
};

// Drives every client database by hand: sharing, sealing, answering.
Run Drive(const ProtocolInstance& inst, PartyId leader, uint64_t seed) {
  Run run;
  std::vector<PartyProfile> clients;
  for (const auto& p : inst.parties) {
    if (p.id() != leader) clients.push_back(p);
  }
  const auto field = SelectFieldSize(inst.num_parties());
  run.plan = MakePartitionPlan(inst.Party(leader), clients);
  run.qp = GenerateQueries(run.plan, field, inst.universe, seed);
  run.ctx = MakeShareContext(seed + 1, field, inst.num_parties(),
                             run.plan.clients);
  for (const auto& db : run.ctx.Databases()) {
    run.dbs.emplace_back(run.ctx, leader, db,
                         ToIncidence(inst.Party(db.party), inst.universe)
                             .Embed(field));
  }
  SeededRandomness source(seed, field);
  std::vector<Message> shares;
  for (auto& d : run.dbs) {
    for (auto& m : d.Emit(source)) shares.push_back(m);
  }
  for (const auto& m : shares) {
    for (auto& d : run.dbs) {
      if (d.self() == m.dest) d.Accept(m);
    }
  }
  for (auto& d : run.dbs) d.Seal();
  run.queries = QueryMessages(run.qp, leader, run.ctx.session_id);
  std::vector<AnswerValue> values;
  for (const auto& q : run.queries) {
    for (auto& d : run.dbs) {
      if (d.self() == q.dest) run.answers.push_back(d.Respond(q));
    }
    values.push_back(AnswerFromMessage(run.answers.back(), field));
  }
  run.result = Decode(run.plan, run.qp, values, field);
  return run;
}

TEST(AnswerTest, Formula) {
  const PrimeField f(5);
  std::vector<uint64_t> x = {1, 0, 1}, q = {2, 3, 4};
  // c (<x,q> + s + t) = 3 (6 + 1 + 2) = 27 = 2 mod 5
  EXPECT_EQ(Answer(f.Vector(x), f.Vector(q), f.Element(1), f.Element(2),
                   f.Element(3))
                .value(),
            2u);
}

TEST(ClientDatabaseTest, WorkedExamplesDecode) {
  for (const auto& f : {Sec4Fixture(), Sec71Fixture(), Sec72Fixture()}) {
    for (uint64_t seed = 0; seed < 20; ++seed) {
      const auto run = Drive(f.instance, *f.leader, seed);
      EXPECT_EQ(run.result.intersection, f.expected_intersection) << f.name;
      EXPECT_EQ(run.result.download_cost, f.expected_cost) << f.name;
    }
  }
}

// E_{Y_k} recomputed from the raw inputs: c * (sum_i X_{i,Y_k} + target).
TEST(ClientDatabaseTest, IndicatorsMatchClosedForm) {
  const auto f = Sec72Fixture();
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const auto run = Drive(f.instance, 4, seed);
    const auto& field = run.ctx.field;
    FieldElement c = run.dbs.front().randomness().global;
    for (const auto& [y, e] : run.result.indicators) {
      uint64_t count = 0;
      for (PartyId i = 1; i <= 3; ++i) count += f.instance.Party(i).Holds(y);
      EXPECT_EQ(e, c * (field.Element(count) + run.ctx.correlation_target));
    }
  }
}

TEST(ClientDatabaseTest, RandomInstancesMatchBruteForce) {
  std::mt19937_64 rng(21);
  for (int iter = 0; iter < 300; ++iter) {
    const int m = 2 + rng() % 4;
    const uint64_t k = 1 + rng() % 7;
    ProtocolInstance inst{Universe(k), {}};
    for (int i = 1; i <= m; ++i) {
      ElementSet s;
      for (ElementId e = 1; e <= k; ++e) {
        if (rng() % 3) s.push_back(e);
      }
      inst.parties.emplace_back(i, 2 + rng() % 4, s);
    }
    const PartyId leader = ElectLeader(inst.parties).leader;
    const auto run = Drive(inst, leader, iter);
    EXPECT_EQ(run.result.intersection, BruteForceIntersection(inst.parties));
  }
}

TEST(ClientDatabaseTest, AnswerAllAgreesWithEndpoints) {
  const auto f = Sec72Fixture();
  const auto run = Drive(f.instance, 4, 3);
  SeededRandomness source(3, run.ctx.field);
  const auto bundle = ComposeBundle(run.ctx, source);
  std::vector<std::vector<FieldElement>> data;
  for (const auto& c : run.plan.clients) {
    data.push_back(ToIncidence(f.instance.Party(c.party()), f.instance.universe)
                       .Embed(run.ctx.field));
  }
  const auto flat = AnswerAll(run.plan, run.qp, bundle, data);
  ASSERT_EQ(flat.size(), run.answers.size());
  for (size_t s = 0; s < flat.size(); ++s) {
    EXPECT_EQ(flat[s].value(), run.answers[s].values[0]);
  }
}

TEST(ClientDatabaseTest, RejectsMalformedQueries) {
  const auto f = Sec4Fixture();
  auto run = Drive(f.instance, 3, 1);
  // A fresh database for party 1, database 2 with sealed randomness.
  auto fresh = [&]() {
    std::vector<ClientDatabase> dbs;
    for (const auto& d : run.ctx.Databases()) {
      dbs.emplace_back(run.ctx, 3, d,
                       ToIncidence(f.instance.Party(d.party),
                                   f.instance.universe)
                           .Embed(run.ctx.field));
    }
    SeededRandomness source(1, run.ctx.field);
    std::vector<Message> shares;
    for (auto& d : dbs) {
      for (auto& m : d.Emit(source)) shares.push_back(m);
    }
    for (const auto& m : shares) {
      for (auto& d : dbs) {
        if (d.self() == m.dest) d.Accept(m);
      }
    }
    for (auto& d : dbs) d.Seal();
    return dbs[1];
  };
  Message good;
  for (const auto& q : run.queries) {
    if (q.dest == Endpoint{1, 2}) good = q;
  }
  ASSERT_EQ(good.dest, (Endpoint{1, 2}));
  {
    auto db = fresh();
    EXPECT_NO_THROW(db.Respond(good));
    EXPECT_THROW(db.Respond(good), Error);  // replay
  }
  auto expect_reject = [&](Message q) {
    auto db = fresh();
    try {
      db.Respond(q);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kProtocolViolation);
    }
  };
  Message m = good;
  m.session_id += 1;
  expect_reject(m);
  m = good;
  m.values.pop_back();
  expect_reject(m);
  m = good;
  m.values[0] = 3;
  expect_reject(m);
  m = good;
  m.partition = 2;
  expect_reject(m);
  m = good;
  m.target = 2;  // rank 2 lives at database 3
  expect_reject(m);
  m = good;
  m.target.reset();
  expect_reject(m);
  m = good;
  m.origin = {2, 0};
  expect_reject(m);
  m = good;
  m.type = MessageType::kAnswer;
  expect_reject(m);

  ClientDatabase unsealed(run.ctx, 3, {1, 2},
                          std::vector<FieldElement>(4, run.ctx.field.Zero()));
  EXPECT_THROW(unsealed.Respond(good), Error);
}

}  // namespace
}  // namespace mppsi
