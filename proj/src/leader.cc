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
#include <string>

#include "mppsi/rng.h"

namespace mppsi {

uint64_t CeilDiv(uint64_t a, uint64_t b) { return a / b + (a % b != 0); }

std::optional<uint64_t> CostTable::Cost(PartyId t) const {
  if (t < 1 || t > num_parties()) {
    Throw(ErrorCode::kInvalidArgument, "unknown party " + std::to_string(t));
  }
  return costs[t - 1];
}

CostTable ComputeCostTable(std::span<const PartyProfile> parties) {
  CostTable table;
  for (size_t t = 0; t < parties.size(); ++t) {
    std::optional<uint64_t> total = 0;
    for (size_t i = 0; i < parties.size(); ++i) {
      if (i == t) continue;
      const uint64_t n = parties[i].num_databases();
      if (n < 2) {
        total.reset();
        break;
      }
      *total += CeilDiv(parties[t].cardinality() * n, n - 1);
    }
    table.costs.push_back(total);
  }
  return table;
}

Election ElectLeader(std::span<const PartyProfile> parties) {
  if (parties.size() < 2) {
    Throw(ErrorCode::kInvalidPartyCount,
          "need at least 2 parties, got " + std::to_string(parties.size()));
  }
  Election e;
  e.table = ComputeCostTable(parties);
  std::optional<uint64_t> best;
  for (size_t t = 0; t < parties.size(); ++t) {
    const auto& c = e.table.costs[t];
    if (c && (!best || *c < *best)) {
      best = c;
      e.leader = parties[t].id();
    }
  }
  if (!best) {
    Throw(ErrorCode::kInfeasible,
          "no feasible leader: every candidate has a counterpart with a "
          "single database");
  }
  return e;
}

uint64_t DownloadCost(const PartyProfile& leader,
                      std::span<const PartyProfile> clients) {
  uint64_t total = 0;
  for (const auto& c : clients) {
    const uint64_t n = c.num_databases();
    if (n < 2) {
      Throw(ErrorCode::kInfeasible,
            "party " + std::to_string(c.id()) + " has a single database");
    }
    total += CeilDiv(leader.cardinality() * n, n - 1);
  }
  return total;
}

ClientLayout::ClientLayout(PartyId party, int num_databases,
                           uint32_t leader_set_size)
    : party_(party),
      num_databases_(num_databases),
      leader_set_size_(leader_set_size),
      chunk_(num_databases > 1 ? static_cast<uint32_t>(num_databases - 1)
                               : 0) {
  if (num_databases < 2) {
    Throw(ErrorCode::kInfeasible, "party " + std::to_string(party) +
                                      " has a single database; it cannot "
                                      "serve as a client");
  }
}

uint32_t ClientLayout::num_partitions() const {
  return static_cast<uint32_t>(CeilDiv(leader_set_size_, chunk_));
}

int ClientLayout::used_databases() const {
  return static_cast<int>(
      std::min<uint64_t>(num_databases_, uint64_t{leader_set_size_} + 1));
}

uint32_t ClientLayout::PartitionSize(uint32_t partition) const {
  if (partition < 1 || partition > num_partitions()) return 0;
  const uint32_t before = (partition - 1) * chunk_;
  return std::min(chunk_, leader_set_size_ - before);
}

ClientLayout::Slot ClientLayout::SlotOf(uint32_t rank) const {
  if (rank < 1 || rank > leader_set_size_) {
    Throw(ErrorCode::kInvalidArgument, "rank " + std::to_string(rank) +
                                           " outside leader set of size " +
                                           std::to_string(leader_set_size_));
  }
  return Slot{(rank - 1) / chunk_ + 1,
              static_cast<int>((rank - 1) % chunk_) + 2};
}

std::optional<uint32_t> ClientLayout::RankAt(uint32_t partition,
                                             int database) const {
  if (partition < 1 || partition > num_partitions()) return std::nullopt;
  if (database < 2 || static_cast<uint32_t>(database - 1) > chunk_) {
    return std::nullopt;
  }
  const uint32_t rank = (partition - 1) * chunk_ + (database - 1);
  if (rank > leader_set_size_) return std::nullopt;
  return rank;
}

std::vector<uint32_t> ClientLayout::RanksAt(int database) const {
  std::vector<uint32_t> out;
  for (uint32_t l = 1; l <= num_partitions(); ++l) {
    if (auto r = RankAt(l, database)) out.push_back(*r);
  }
  return out;
}

uint32_t PartitionPlan::kappa() const {
  uint32_t k = 0;
  for (const auto& c : clients) k = std::max(k, c.num_partitions());
  return k;
}

size_t PartitionPlan::ClientIndex(PartyId party) const {
  for (size_t c = 0; c < clients.size(); ++c) {
    if (clients[c].party() == party) return c;
  }
  Throw(ErrorCode::kInvalidArgument,
        "party " + std::to_string(party) + " is not a client");
}

PartitionPlan MakePartitionPlan(const PartyProfile& leader,
                                std::span<const PartyProfile> clients) {
  PartitionPlan plan;
  plan.leader = leader.id();
  plan.leader_set = leader.data_set();
  const auto r = plan.leader_set_size();
  std::vector<PartyProfile> sorted(clients.begin(), clients.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.id() < b.id(); });
  for (const auto& c : sorted) {
    if (c.id() == leader.id()) {
      Throw(ErrorCode::kInvalidArgument, "leader listed among its clients");
    }
    ClientLayout layout(c.id(), c.num_databases(), r);
    std::vector<ElementSet> parts(layout.num_partitions());
    for (uint32_t k = 1; k <= r; ++k) {
      parts[layout.SlotOf(k).partition - 1].push_back(plan.ElementAt(k));
    }
    plan.clients.push_back(layout);
    plan.partitions.push_back(std::move(parts));
  }
  return plan;
}

QueryPlan BuildQueries(const PartitionPlan& plan, const PrimeField& field,
                       std::vector<std::vector<FieldElement>> base_vectors) {
  if (base_vectors.size() < plan.kappa()) {
    Throw(ErrorCode::kInvalidArgument,
          "need " + std::to_string(plan.kappa()) + " base vectors, got " +
              std::to_string(base_vectors.size()));
  }
  QueryPlan qp;
  qp.base_vectors = std::move(base_vectors);
  const FieldElement one = field.One();
  for (const auto& layout : plan.clients) {
    for (uint32_t l = 1; l <= layout.num_partitions(); ++l) {
      const auto& h = qp.base_vectors[l - 1];
      qp.queries.push_back(
          IssuedQuery{{layout.party(), 1}, l, std::nullopt, std::nullopt, h});
      for (int j = 2; j <= layout.used_databases(); ++j) {
        auto rank = layout.RankAt(l, j);
        if (!rank) continue;  // short final partition
        const ElementId y = plan.ElementAt(*rank);
        if (y < 1 || y > h.size()) {
          Throw(ErrorCode::kInvalidArgument,
                "leader element " + std::to_string(y) + " outside universe");
        }
        std::vector<FieldElement> q = h;
        q[y - 1] += one;
        qp.queries.push_back(
            IssuedQuery{{layout.party(), j}, l, rank, y, std::move(q)});
      }
    }
  }
  return qp;
}

QueryPlan GenerateQueries(const PartitionPlan& plan, const PrimeField& field,
                          const Universe& universe, uint64_t seed) {
  std::vector<std::vector<FieldElement>> h;
  for (uint32_t l = 1; l <= plan.kappa(); ++l) {
    LabeledDraw draw(seed, DrawTag::kBaseVector, {l});
    std::vector<FieldElement> v;
    v.reserve(universe.size);
    for (uint64_t k = 0; k < universe.size; ++k) {
      v.push_back(field.Element(draw.Below(field.modulus())));
    }
    h.push_back(std::move(v));
  }
  return BuildQueries(plan, field, std::move(h));
}

std::vector<Message> QueryMessages(const QueryPlan& qp, PartyId leader,
                                   uint64_t session_id) {
  std::vector<Message> out;
  out.reserve(qp.queries.size());
  for (const auto& q : qp.queries) {
    Message m;
    m.type = MessageType::kQuery;
    m.session_id = session_id;
    m.phase = Phase::kQuery;
    m.origin = {leader, 0};
    m.dest = q.dest;
    m.partition = q.partition;
    m.target = q.rank;
    m.values.reserve(q.vector.size());
    for (const auto& x : q.vector) m.values.push_back(x.value());
    out.push_back(std::move(m));
  }
  return out;
}

AnswerValue AnswerFromMessage(const Message& m, const PrimeField& field) {
  if (m.type != MessageType::kAnswer || m.values.size() != 1 ||
      !m.partition) {
    Throw(ErrorCode::kProtocolViolation,
          "expected a single-valued answer message from " + ToString(m.origin));
  }
  if (m.values[0] >= field.modulus()) {
    Throw(ErrorCode::kProtocolViolation,
          "answer value out of field range from " + ToString(m.origin));
  }
  return AnswerValue{m.origin, *m.partition, m.target,
                     field.Element(m.values[0])};
}

Decoder::Decoder(const PartitionPlan& plan, const QueryPlan& qp,
                 const PrimeField& field)
    : field_(field),
      leader_set_(plan.leader_set),
      num_clients_(plan.clients.size()),
      rank_count_(plan.leader_set_size()) {
  for (size_t s = 0; s < qp.queries.size(); ++s) {
    const auto& q = qp.queries[s];
    Key key{q.dest, q.partition, q.rank.value_or(0)};
    keys_.push_back(key);
    slot_by_key_.emplace(key, s);
  }
  pairs_.resize(num_clients_ * rank_count_);
  for (size_t c = 0; c < num_clients_; ++c) {
    const auto& layout = plan.clients[c];
    for (uint32_t k = 1; k <= rank_count_; ++k) {
      const auto slot = layout.SlotOf(k);
      auto target = SlotOf({layout.party(), slot.database}, slot.partition, k);
      auto base =
          SlotOf({layout.party(), 1}, slot.partition, std::nullopt);
      if (!target || !base) {
        Throw(ErrorCode::kInvalidArgument,
              "query plan does not cover rank " + std::to_string(k) +
                  " of party " + std::to_string(layout.party()));
      }
      pairs_[c * rank_count_ + (k - 1)] = {*target, *base};
    }
  }
}

std::optional<size_t> Decoder::SlotOf(const Endpoint& origin,
                                      uint32_t partition,
                                      std::optional<uint32_t> rank) const {
  auto it = slot_by_key_.find(Key{origin, partition, rank.value_or(0)});
  if (it == slot_by_key_.end()) return std::nullopt;
  return it->second;
}

void Decoder::Differences(std::span<const FieldElement> answers,
                          std::span<FieldElement> z) const {
  for (size_t i = 0; i < pairs_.size(); ++i) {
    z[i] = answers[pairs_[i].first] - answers[pairs_[i].second];
  }
}

void Decoder::Indicators(std::span<const FieldElement> answers,
                         std::span<FieldElement> e) const {
  for (uint32_t k = 0; k < rank_count_; ++k) {
    FieldElement acc = field_.Zero();
    for (size_t c = 0; c < num_clients_; ++c) {
      const auto& [t, b] = pairs_[c * rank_count_ + k];
      acc += answers[t] - answers[b];
    }
    e[k] = acc;
  }
}

IntersectionResult Decoder::DecodeAligned(
    std::span<const FieldElement> answers) const {
  if (answers.size() != num_slots()) {
    Throw(ErrorCode::kProtocolViolation,
          "expected " + std::to_string(num_slots()) + " answers, got " +
              std::to_string(answers.size()));
  }
  std::vector<FieldElement> e(rank_count_, field_.Zero());
  Indicators(answers, e);
  IntersectionResult result;
  for (uint32_t k = 0; k < rank_count_; ++k) {
    result.indicators.emplace_back(leader_set_[k], e[k]);
    if (e[k].IsZero()) result.intersection.push_back(leader_set_[k]);
  }
  result.download_cost = answers.size();
  return result;
}

IntersectionResult Decoder::Decode(std::span<const AnswerValue> answers) const {
  std::vector<std::optional<FieldElement>> slots(num_slots());
  for (const auto& a : answers) {
    auto s = SlotOf(a.origin, a.partition, a.rank);
    if (!s) {
      Throw(ErrorCode::kProtocolViolation,
            "unexpected answer from " + ToString(a.origin) + " partition " +
                std::to_string(a.partition));
    }
    if (slots[*s]) {
      Throw(ErrorCode::kProtocolViolation,
            "duplicate answer from " + ToString(a.origin) + " partition " +
                std::to_string(a.partition));
    }
    if (a.value.modulus() != field_.modulus()) {
      Throw(ErrorCode::kFieldMismatch, "answer in the wrong field");
    }
    slots[*s] = a.value;
  }
  std::vector<FieldElement> aligned;
  aligned.reserve(slots.size());
  for (size_t s = 0; s < slots.size(); ++s) {
    if (!slots[s]) {
      const auto& [ep, l, r] = keys_[s];
      Throw(ErrorCode::kProtocolViolation,
            "missing answer from " + ToString(ep) + " partition " +
                std::to_string(l));
    }
    aligned.push_back(*slots[s]);
  }
  return DecodeAligned(aligned);
}

IntersectionResult Decode(const PartitionPlan& plan, const QueryPlan& qp,
                          std::span<const AnswerValue> answers,
                          const PrimeField& field) {
  return Decoder(plan, qp, field).Decode(answers);
}

}  // namespace mppsi
