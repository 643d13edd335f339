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

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <tuple>
#include <vector>

#include "mppsi/field.h"
#include "mppsi/message.h"
#include "mppsi/model.h"

namespace mppsi {

uint64_t CeilDiv(uint64_t a, uint64_t b);

// Download cost D_t = sum_{i != t} ceil(|P_t| N_i / (N_i - 1)) for every
// candidate leader t. A candidate with some counterpart holding fewer than
// two databases has no cost (it cannot run the protocol).
struct CostTable {
  std::vector<std::optional<uint64_t>> costs;  // costs[t - 1]

  std::optional<uint64_t> Cost(PartyId t) const;
  int num_parties() const { return static_cast<int>(costs.size()); }
};

CostTable ComputeCostTable(std::span<const PartyProfile> parties);

struct Election {
  PartyId leader = 0;
  CostTable table;
};

// Picks the feasible candidate with the smallest D_t, lowest id on ties.
// Throws kInvalidPartyCount for M < 2 and kInfeasible if no candidate works.
Election ElectLeader(std::span<const PartyProfile> parties);

// Throws kInfeasible if any client has fewer than two databases.
uint64_t DownloadCost(const PartyProfile& leader,
                      std::span<const PartyProfile> clients);

// Query layout for one client party. Everything here follows from the public
// leader-set size R and the client's database count, so client databases can
// compute it without learning the leader's elements.
//
// The sorted leader set is cut into consecutive chunks of N_i - 1 ranks.
// Rank k (1-based) sits in partition (k-1)/(N_i-1) + 1 and is retrieved from
// database (k-1)%(N_i-1) + 2; database 1 receives the raw base vector of
// every partition.
class ClientLayout {
 public:
  struct Slot {
    uint32_t partition;
    int database;
  };

  // Throws kInfeasible when num_databases < 2.
  ClientLayout(PartyId party, int num_databases, uint32_t leader_set_size);

  PartyId party() const { return party_; }
  int num_databases() const { return num_databases_; }
  uint32_t leader_set_size() const { return leader_set_size_; }
  uint32_t chunk() const { return chunk_; }
  // eta_i = ceil(R / (N_i - 1)).
  uint32_t num_partitions() const;
  // min(N_i, R + 1): only the lowest-indexed databases take part.
  int used_databases() const;
  uint32_t PartitionSize(uint32_t partition) const;

  Slot SlotOf(uint32_t rank) const;
  std::optional<uint32_t> RankAt(uint32_t partition, int database) const;
  std::vector<uint32_t> RanksAt(int database) const;

  friend bool operator==(const ClientLayout&, const ClientLayout&) = default;

 private:
  PartyId party_;
  int num_databases_;
  uint32_t leader_set_size_;
  uint32_t chunk_;
};

struct PartitionPlan {
  PartyId leader = 0;
  ElementSet leader_set;  // Y_1 < Y_2 < ... < Y_R
  std::vector<ClientLayout> clients;  // ascending party id
  // partitions[c][l - 1] lists the elements of partition l of client c.
  std::vector<std::vector<ElementSet>> partitions;

  uint32_t leader_set_size() const {
    return static_cast<uint32_t>(leader_set.size());
  }
  // kappa = max_i eta_i.
  uint32_t kappa() const;
  ElementId ElementAt(uint32_t rank) const { return leader_set.at(rank - 1); }
  size_t ClientIndex(PartyId party) const;
};

// Throws kInfeasible if a client has fewer than two databases. An empty
// leader set produces clients with zero partitions.
PartitionPlan MakePartitionPlan(const PartyProfile& leader,
                                std::span<const PartyProfile> clients);

struct IssuedQuery {
  Endpoint dest;
  uint32_t partition = 0;
  std::optional<uint32_t> rank;      // absent for database 1
  std::optional<ElementId> element;  // leader-private: Y_rank
  std::vector<FieldElement> vector;
};

struct QueryPlan {
  std::vector<std::vector<FieldElement>> base_vectors;  // h_1 .. h_kappa
  // Ordered by client, then partition, then database.
  std::vector<IssuedQuery> queries;
};

// Client i uses h_1 .. h_{eta_i}. Database 1 gets h_l for partition l; the
// database retrieving rank k gets h_l with 1 added at position Y_k.
QueryPlan BuildQueries(const PartitionPlan& plan, const PrimeField& field,
                       std::vector<std::vector<FieldElement>> base_vectors);

// Draws kappa uniform vectors in F_L^K from `seed` and builds the queries.
QueryPlan GenerateQueries(const PartitionPlan& plan, const PrimeField& field,
                          const Universe& universe, uint64_t seed);

std::vector<Message> QueryMessages(const QueryPlan& qp, PartyId leader,
                                   uint64_t session_id);

struct AnswerValue {
  Endpoint origin;
  uint32_t partition = 0;
  std::optional<uint32_t> rank;
  FieldElement value;
};

// Throws kProtocolViolation unless `m` is an answer message.
AnswerValue AnswerFromMessage(const Message& m, const PrimeField& field);

struct IntersectionResult {
  ElementSet intersection;
  // E_{Y_k} for k = 1..R.
  std::vector<std::pair<ElementId, FieldElement>> indicators;
  uint64_t download_cost = 0;

  friend bool operator==(const IntersectionResult&,
                         const IntersectionResult&) = default;
};

// Leader-side decoding. The subtraction Z_{i,Y_k} = A(target Y_k) - A(db 1,
// same partition) removes the masked random combination; summing Z over the
// clients gives E_{Y_k}, which vanishes exactly on the intersection.
class Decoder {
 public:
  Decoder(const PartitionPlan& plan, const QueryPlan& qp,
          const PrimeField& field);

  size_t num_slots() const { return keys_.size(); }
  size_t num_clients() const { return num_clients_; }
  uint32_t leader_set_size() const { return rank_count_; }

  // `answers[s]` answers `qp.queries[s]`. Writes Z for client c and rank k
  // to z[c * R + k - 1].
  void Differences(std::span<const FieldElement> answers,
                   std::span<FieldElement> z) const;
  // Writes E_{Y_k} to e[k - 1].
  void Indicators(std::span<const FieldElement> answers,
                  std::span<FieldElement> e) const;

  IntersectionResult DecodeAligned(std::span<const FieldElement> answers) const;
  // Order-independent: answers are matched to queries by their tags.
  // Throws kProtocolViolation on missing, duplicate or unexpected answers.
  IntersectionResult Decode(std::span<const AnswerValue> answers) const;

  std::optional<size_t> SlotOf(const Endpoint& origin, uint32_t partition,
                               std::optional<uint32_t> rank) const;

 private:
  using Key = std::tuple<Endpoint, uint32_t, uint32_t>;  // rank 0 = none

  PrimeField field_;
  ElementSet leader_set_;
  size_t num_clients_;
  uint32_t rank_count_;
  std::vector<Key> keys_;
  std::map<Key, size_t> slot_by_key_;
  // For client c and rank k: (target slot, base slot).
  std::vector<std::pair<size_t, size_t>> pairs_;
};

IntersectionResult Decode(const PartitionPlan& plan, const QueryPlan& qp,
                          std::span<const AnswerValue> answers,
                          const PrimeField& field);

}  // namespace mppsi
