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

#include "mppsi/randomness.h"

#include <algorithm>
#include <set>
#include <string>

#include "mppsi/rng.h"

namespace mppsi {
namespace {

Message Share(const ShareContext& ctx, MessageType type, const Endpoint& from,
              const Endpoint& to, std::vector<uint64_t> values) {
  Message m;
  m.type = type;
  m.session_id = ctx.session_id;
  m.phase = Phase::kRandomness;
  m.origin = from;
  m.dest = to;
  m.values = std::move(values);
  return m;
}

[[noreturn]] void Violation(const Endpoint& self, const std::string& what) {
  Throw(ErrorCode::kProtocolViolation,
        "randomness at " + ToString(self) + ": " + what);
}

}  // namespace

FieldElement CorrelationTarget(const PrimeField& field, int num_parties) {
  return field.Zero() - field.Element(static_cast<uint64_t>(num_parties - 1));
}

const ClientLayout& ShareContext::Client(PartyId party) const {
  for (const auto& c : clients) {
    if (c.party() == party) return c;
  }
  Throw(ErrorCode::kInvalidArgument,
        "party " + std::to_string(party) + " is not a client");
}

std::vector<Endpoint> ShareContext::Databases() const {
  std::vector<Endpoint> out;
  for (const auto& c : clients) {
    for (int j = 1; j <= c.used_databases(); ++j) out.push_back({c.party(), j});
  }
  return out;
}

ShareContext MakeShareContext(uint64_t session_id, const PrimeField& field,
                              int num_parties,
                              std::vector<ClientLayout> clients) {
  if (clients.empty()) {
    Throw(ErrorCode::kInvalidArgument, "share context without clients");
  }
  std::sort(clients.begin(), clients.end(),
            [](const auto& a, const auto& b) { return a.party() < b.party(); });
  ShareContext ctx;
  ctx.session_id = session_id;
  ctx.field = field;
  ctx.num_parties = num_parties;
  ctx.clients = std::move(clients);
  ctx.correlation_target = CorrelationTarget(field, num_parties);
  return ctx;
}

FieldElement SeededRandomness::Local(PartyId party, uint32_t partition) {
  LabeledDraw d(seed_, DrawTag::kLocal,
                {static_cast<uint64_t>(party), partition});
  return field_.Element(d.Below(field_.modulus()));
}

FieldElement SeededRandomness::Individual(PartyId party, uint32_t rank) {
  LabeledDraw d(seed_, DrawTag::kIndividual,
                {static_cast<uint64_t>(party), rank});
  return field_.Element(d.Below(field_.modulus()));
}

FieldElement SeededRandomness::Global() {
  LabeledDraw d(seed_, DrawTag::kGlobal, {});
  return field_.Element(1 + d.Below(field_.modulus() - 1));
}

std::vector<FieldElement> GenerateLocal(PartyId party, uint32_t eta,
                                        const PrimeField& field,
                                        uint64_t seed) {
  SeededRandomness source(seed, field);
  std::vector<FieldElement> s;
  for (uint32_t l = 1; l <= eta; ++l) s.push_back(source.Local(party, l));
  return s;
}

FieldElement GenerateGlobal(const PrimeField& field, uint64_t seed) {
  return SeededRandomness(seed, field).Global();
}

FreeIndividual GenerateIndividualFree(const ShareContext& ctx,
                                      RandomnessSource& source) {
  FreeIndividual out;
  const auto& corr = ctx.Client(ctx.correlator());
  for (const auto& c : ctx.clients) {
    if (ctx.IsCorrelator(c.party())) continue;
    for (uint32_t k = 1; k <= c.leader_set_size(); ++k) {
      const FieldElement t = source.Individual(c.party(), k);
      out.values.emplace(std::make_pair(c.party(), k), t);
      Message m = Share(ctx, MessageType::kIndividualShare,
                        {c.party(), c.SlotOf(k).database},
                        {corr.party(), corr.SlotOf(k).database}, {t.value()});
      m.target = k;
      out.shares.push_back(std::move(m));
    }
  }
  return out;
}

FieldElement CorrelateOne(FieldElement target,
                          std::span<const FieldElement> free_values) {
  for (const auto& v : free_values) target -= v;
  return target;
}

std::vector<FieldElement> Correlate(
    std::span<const std::vector<FieldElement>> free_by_rank,
    FieldElement target, size_t expected_shares) {
  std::vector<FieldElement> out;
  out.reserve(free_by_rank.size());
  for (size_t k = 0; k < free_by_rank.size(); ++k) {
    if (free_by_rank[k].size() != expected_shares) {
      Throw(ErrorCode::kProtocolViolation,
            "rank " + std::to_string(k + 1) + " carries " +
                std::to_string(free_by_rank[k].size()) + " shares, expected " +
                std::to_string(expected_shares));
    }
    out.push_back(CorrelateOne(target, free_by_rank[k]));
  }
  return out;
}

Origination Originate(const ShareContext& ctx, const Endpoint& self,
                      RandomnessSource& source) {
  const auto& layout = ctx.Client(self.party);
  if (self.database < 1 || self.database > layout.used_databases()) {
    Throw(ErrorCode::kInvalidArgument,
          "database " + ToString(self) + " takes no part in the session");
  }
  Origination own;
  if (self.database == 1) {
    std::vector<uint64_t> values;
    for (uint32_t l = 1; l <= layout.num_partitions(); ++l) {
      own.local.push_back(source.Local(self.party, l));
      values.push_back(own.local.back().value());
    }
    for (int j = 2; j <= layout.used_databases(); ++j) {
      own.outgoing.push_back(Share(ctx, MessageType::kLocalShare, self,
                                   {self.party, j}, values));
    }
  }
  if (self == ctx.global_origin()) {
    own.global = source.Global();
    for (const auto& db : ctx.Databases()) {
      if (db == self) continue;
      own.outgoing.push_back(Share(ctx, MessageType::kGlobalShare, self, db,
                                   {own.global->value()}));
    }
  }
  if (self.database >= 2 && !ctx.IsCorrelator(self.party)) {
    const auto& corr = ctx.Client(ctx.correlator());
    for (uint32_t k : layout.RanksAt(self.database)) {
      const FieldElement t = source.Individual(self.party, k);
      own.individual.emplace(k, t);
      Message m = Share(ctx, MessageType::kIndividualShare, self,
                        {corr.party(), corr.SlotOf(k).database}, {t.value()});
      m.target = k;
      own.outgoing.push_back(std::move(m));
    }
  }
  return own;
}

DatabaseRandomness SealRandomness(const ShareContext& ctx,
                                  const Endpoint& self,
                                  const Origination& own,
                                  std::span<const Message> received) {
  const auto& layout = ctx.Client(self.party);
  const auto& field = ctx.field;
  DatabaseRandomness r;
  r.self = self;

  std::optional<std::vector<FieldElement>> local;
  std::optional<FieldElement> global;
  std::map<uint32_t, std::vector<FieldElement>> shares;
  std::map<uint32_t, std::set<PartyId>> share_origins;
  if (self.database == 1) local = own.local;
  if (own.global) global = own.global;

  for (const auto& m : received) {
    if (m.phase != Phase::kRandomness || !(m.dest == self)) {
      Violation(self, "misaddressed message from " + ToString(m.origin));
    }
    if (m.session_id != ctx.session_id) {
      Violation(self, "foreign session id from " + ToString(m.origin));
    }
    for (uint64_t v : m.values) {
      if (v >= field.modulus()) Violation(self, "share out of field range");
    }
    switch (m.type) {
      case MessageType::kLocalShare:
        if (local || !(m.origin == Endpoint{self.party, 1}) ||
            m.values.size() != layout.num_partitions()) {
          Violation(self, "unexpected local share from " + ToString(m.origin));
        }
        local = field.Vector(m.values);
        break;
      case MessageType::kGlobalShare:
        if (global || !(m.origin == ctx.global_origin()) ||
            m.values.size() != 1 || m.values[0] == 0) {
          Violation(self,
                    "unexpected global share from " + ToString(m.origin));
        }
        global = field.Element(m.values[0]);
        break;
      case MessageType::kIndividualShare: {
        if (!ctx.IsCorrelator(self.party) || !m.target ||
            m.values.size() != 1 || ctx.IsCorrelator(m.origin.party)) {
          Violation(self, "unexpected individual share from " +
                              ToString(m.origin));
        }
        const uint32_t k = *m.target;
        if (k < 1 || k > layout.leader_set_size() ||
            layout.SlotOf(k).database != self.database) {
          Violation(self, "individual share for rank " + std::to_string(k) +
                              " delivered to the wrong database");
        }
        if (!share_origins[k].insert(m.origin.party).second) {
          Violation(self, "duplicate individual share for rank " +
                              std::to_string(k));
        }
        shares[k].push_back(field.Element(m.values[0]));
        break;
      }
      default:
        Violation(self, std::string("unexpected ") +
                            MessageTypeName(m.type) + " message");
    }
  }

  if (!local) Violation(self, "missing local randomness");
  if (!global) Violation(self, "missing global randomness");
  r.local = std::move(*local);
  r.global = *global;

  if (self.database >= 2) {
    const auto ranks = layout.RanksAt(self.database);
    if (ctx.IsCorrelator(self.party)) {
      std::vector<std::vector<FieldElement>> free_by_rank;
      for (uint32_t k : ranks) free_by_rank.push_back(shares[k]);
      auto t = Correlate(free_by_rank, ctx.correlation_target,
                         ctx.clients.size() - 1);
      for (size_t i = 0; i < ranks.size(); ++i) r.individual.emplace(ranks[i], t[i]);
    } else {
      r.individual = own.individual;
    }
  }
  return r;
}

const ClientRandomness& RandomnessBundle::Client(PartyId party) const {
  for (const auto& c : clients) {
    if (c.party == party) return c;
  }
  Throw(ErrorCode::kInvalidArgument,
        "no randomness for party " + std::to_string(party));
}

DatabaseRandomness RandomnessBundle::ForDatabase(const ShareContext& ctx,
                                                 const Endpoint& db) const {
  const auto& c = Client(db.party);
  DatabaseRandomness r;
  r.self = db;
  r.local = c.local;
  r.global = global;
  if (db.database >= 2) {
    for (uint32_t k : ctx.Client(db.party).RanksAt(db.database)) {
      r.individual.emplace(k, c.individual.at(k));
    }
  }
  return r;
}

RandomnessBundle ComposeBundle(const ShareContext& ctx,
                               RandomnessSource& source) {
  RandomnessBundle b;
  b.global = source.Global();
  const uint32_t r = ctx.clients.front().leader_set_size();
  std::vector<std::vector<FieldElement>> free_by_rank(r);
  for (const auto& layout : ctx.clients) {
    ClientRandomness c;
    c.party = layout.party();
    for (uint32_t l = 1; l <= layout.num_partitions(); ++l) {
      c.local.push_back(source.Local(c.party, l));
    }
    if (!ctx.IsCorrelator(c.party)) {
      for (uint32_t k = 1; k <= r; ++k) {
        const FieldElement t = source.Individual(c.party, k);
        c.individual.emplace(k, t);
        free_by_rank[k - 1].push_back(t);
      }
    }
    b.clients.push_back(std::move(c));
  }
  auto t = Correlate(free_by_rank, ctx.correlation_target,
                     ctx.clients.size() - 1);
  auto& corr = b.clients.back();
  for (uint32_t k = 1; k <= r; ++k) corr.individual.emplace(k, t[k - 1]);
  return b;
}

RandomnessPhase RunRandomnessPhase(const ShareContext& ctx,
                                   RandomnessSource& source) {
  RandomnessPhase phase;
  const auto dbs = ctx.Databases();
  std::vector<Origination> own;
  std::map<Endpoint, std::vector<Message>> inbox;
  for (const auto& db : dbs) {
    own.push_back(Originate(ctx, db, source));
    for (const auto& m : own.back().outgoing) {
      phase.messages.push_back(m);
      inbox[m.dest].push_back(m);
    }
  }
  for (size_t i = 0; i < dbs.size(); ++i) {
    phase.databases.push_back(
        SealRandomness(ctx, dbs[i], own[i], inbox[dbs[i]]));
  }
  phase.bundle.global = phase.databases.front().global;
  for (const auto& layout : ctx.clients) {
    ClientRandomness c;
    c.party = layout.party();
    for (const auto& d : phase.databases) {
      if (d.self.party != c.party) continue;
      if (d.self.database == 1) c.local = d.local;
      c.individual.insert(d.individual.begin(), d.individual.end());
    }
    phase.bundle.clients.push_back(std::move(c));
  }
  return phase;
}

}  // namespace mppsi
