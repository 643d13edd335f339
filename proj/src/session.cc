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

#include <deque>
#include <fstream>
#include <map>
#include <tuple>

#include "mppsi/net.h"
#include "mppsi/rng.h"
#include "mppsi/wire.h"

namespace mppsi {

FieldElement VariantSource::Local(PartyId party, uint32_t partition) {
  const auto v = base_.Local(party, partition);
  return variant_.zero_local ? field_.Zero() : v;
}

FieldElement VariantSource::Individual(PartyId party, uint32_t rank) {
  const auto v = base_.Individual(party, rank);
  return variant_.zero_individual ? field_.Zero() : v;
}

FieldElement VariantSource::Global() {
  const auto v = base_.Global();
  return variant_.disable_global ? field_.One() : v;
}

std::vector<PartyProfile> PreparedSession::Clients() const {
  std::vector<PartyProfile> out;
  for (const auto& p : instance.parties) {
    if (p.id() != leader) out.push_back(p);
  }
  return out;
}

std::vector<FieldElement> PreparedSession::Data(PartyId party) const {
  return ToIncidence(instance.Party(party), instance.universe).Embed(field);
}

PreparedSession PrepareSession(const ProtocolInstance& instance,
                               std::optional<PartyId> leader, uint64_t seed) {
  instance.Validate();
  PreparedSession s;
  s.instance = instance;
  s.field = SelectFieldSize(instance.num_parties());
  s.seed = seed;
  s.session_id = DeriveSessionId(seed);
  if (leader) {
    if (*leader < 1 || *leader > instance.num_parties()) {
      Throw(ErrorCode::kConfig,
            "leader override names no party: " + std::to_string(*leader));
    }
    s.table = ComputeCostTable(instance.parties);
    if (!s.table.Cost(*leader)) {
      Throw(ErrorCode::kInfeasible,
            "party " + std::to_string(*leader) +
                " cannot lead: a counterpart has a single database");
    }
    s.leader = *leader;
  } else {
    auto e = ElectLeader(instance.parties);
    s.table = std::move(e.table);
    s.leader = e.leader;
  }
  s.plan = MakePartitionPlan(instance.Party(s.leader), s.Clients());
  s.ctx = MakeShareContext(s.session_id, s.field, instance.num_parties(),
                           s.plan.clients);
  return s;
}

PreparedSession PrepareSession(const SessionConfig& config) {
  return PrepareSession(config.instance, config.leader_override, config.seed);
}

ShareContext VariantContext(const PreparedSession& s, const SchemeVariant& v) {
  ShareContext ctx = s.ctx;
  if (v.zero_individual) ctx.correlation_target = s.field.Zero();
  if (v.break_correlation) ctx.correlation_target += s.field.One();
  return ctx;
}

std::vector<std::vector<FieldElement>> VariantBaseVectors(
    const PreparedSession& s, const SchemeVariant& v) {
  auto h = GenerateQueries(s.plan, s.field, s.instance.universe, s.seed)
               .base_vectors;
  if (v.unmasked_queries) {
    for (auto& vec : h) {
      for (auto& x : vec) x = s.field.Zero();
    }
  }
  return h;
}

uint64_t SessionTranscript::download_cost_actual() const {
  uint64_t n = 0;
  for (const auto& m : messages) n += m.type == MessageType::kAnswer;
  return n;
}

SessionTranscript RunInMemory(const PreparedSession& s,
                              RandomnessSource& source,
                              std::vector<std::vector<FieldElement>> h,
                              const SchemeVariant& variant) {
  SessionTranscript t;
  t.session_id = s.session_id;
  t.modulus = s.field.modulus();
  t.leader = s.leader;
  t.table = s.table;
  if (s.plan.leader_set.empty()) return t;  // nothing to retrieve

  const ShareContext ctx = VariantContext(s, variant);
  VariantSource varied(source, variant, s.field);
  std::map<Endpoint, ClientDatabase> dbs;
  for (const auto& db : ctx.Databases()) {
    dbs.emplace(db, ClientDatabase(ctx, s.leader, db, s.Data(db.party)));
  }

  std::deque<Message> wire;
  for (const auto& db : ctx.Databases()) {
    for (auto& m : dbs.at(db).Emit(varied)) wire.push_back(std::move(m));
  }
  while (!wire.empty()) {
    Message m = std::move(wire.front());
    wire.pop_front();
    auto it = dbs.find(m.dest);
    if (it == dbs.end()) {
      Throw(ErrorCode::kProtocolViolation,
            "share addressed to unknown endpoint " + ToString(m.dest));
    }
    it->second.Accept(m);
    t.messages.push_back(std::move(m));
  }
  for (auto& [ep, db] : dbs) db.Seal();

  const QueryPlan qp = BuildQueries(s.plan, s.field, std::move(h));
  const auto queries = QueryMessages(qp, s.leader, s.session_id);
  for (const auto& q : queries) wire.push_back(q);
  std::vector<Message> answers;
  while (!wire.empty()) {
    Message q = std::move(wire.front());
    wire.pop_front();
    answers.push_back(dbs.at(q.dest).Respond(q));
    t.messages.push_back(std::move(q));
  }
  std::vector<AnswerValue> values;
  for (auto& a : answers) {
    values.push_back(AnswerFromMessage(a, s.field));
    t.messages.push_back(std::move(a));
  }
  t.result = Decode(s.plan, qp, values, s.field);
  return t;
}

SessionTranscript RunInMemory(const PreparedSession& s) {
  SeededRandomness source(s.seed, s.field);
  return RunInMemory(s, source, VariantBaseVectors(s, {}));
}

SessionTranscript RunSession(const SessionConfig& config) {
  const auto s = PrepareSession(config);
  if (config.transport == Transport::kNetwork) {
    return RunNetworked(s, config.endpoints);
  }
  return RunInMemory(s);
}

void CheckTranscript(const SessionTranscript& t) {
  auto fail = [](const std::string& what) {
    Throw(ErrorCode::kProtocolViolation, "transcript: " + what);
  };
  const Endpoint leader{t.leader, 0};
  int last = 0;
  using Tag = std::tuple<Endpoint, std::optional<uint32_t>,
                         std::optional<uint32_t>>;
  std::map<Tag, int> pending;
  for (const auto& m : t.messages) {
    int rank = 0;
    switch (m.phase) {
      case Phase::kRandomness:
        rank = 1;
        if (m.origin.party == t.leader || m.dest.party == t.leader ||
            m.origin.database < 1 || m.dest.database < 1) {
          fail("randomness message touches the leader");
        }
        break;
      case Phase::kQuery:
        rank = 2;
        if (!(m.origin == leader) || m.dest.party == t.leader) {
          fail("query not from leader to a client database");
        }
        ++pending[{m.dest, m.partition, m.target}];
        break;
      case Phase::kAnswer:
        rank = 3;
        if (!(m.dest == leader) || m.origin.party == t.leader) {
          fail("answer not from a client database to the leader");
        }
        if (--pending[{m.origin, m.partition, m.target}] < 0) {
          fail("answer from " + ToString(m.origin) + " without a query");
        }
        break;
      case Phase::kControl:
        fail("control message in transcript");
    }
    if (rank < last) fail("phases out of order");
    last = rank;
  }
  for (const auto& [tag, n] : pending) {
    if (n != 0) fail("query to " + ToString(std::get<0>(tag)) + " unanswered");
  }
  if (t.download_cost_actual() != t.result.download_cost) {
    fail("download cost differs from the answer count");
  }
}

std::string TranscriptToJson(const SessionTranscript& t) {
  nlohmann::ordered_json doc;
  doc["session_id"] = t.session_id;
  doc["modulus"] = t.modulus;
  doc["leader"] = t.leader;
  doc["cost_table"] = nlohmann::ordered_json::array();
  for (int p = 1; p <= t.table.num_parties(); ++p) {
    const auto c = t.table.Cost(p);
    doc["cost_table"].push_back(
        {{"party", p},
         {"cost", c ? nlohmann::ordered_json(*c) : nlohmann::ordered_json()}});
  }
  doc["messages"] = nlohmann::ordered_json::array();
  for (const auto& m : t.messages) doc["messages"].push_back(MessageToJson(m));
  auto& r = doc["result"];
  r["intersection"] = t.result.intersection;
  r["indicators"] = nlohmann::ordered_json::array();
  for (const auto& [y, e] : t.result.indicators) {
    r["indicators"].push_back({{"element", y}, {"value", e.value()}});
  }
  r["download_cost"] = t.result.download_cost;
  return doc.dump(2) + "\n";
}

void WriteTranscript(const SessionTranscript& t, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Throw(ErrorCode::kConfig, "cannot write transcript to " + path);
  out << TranscriptToJson(t);
  if (!out.flush()) {
    Throw(ErrorCode::kConfig, "cannot write transcript to " + path);
  }
}

}  // namespace mppsi
