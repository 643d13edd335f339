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
#include <vector>

#include "mppsi/field.h"
#include "mppsi/leader.h"
#include "mppsi/message.h"

namespace mppsi {

// L - (M - 1) reduced mod L: the per-rank sum every client's individual
// randomness must reach so that E_k = c (sum_i X_{i,k} + L - (M - 1)).
FieldElement CorrelationTarget(const PrimeField& field, int num_parties);

// Public parameters shared by all client databases before the protocol.
struct ShareContext {
  uint64_t session_id = 0;
  PrimeField field{2};
  int num_parties = 0;
  std::vector<ClientLayout> clients;  // ascending party id
  FieldElement correlation_target = PrimeField(2).Zero();

  // The last client (P_{M-1} when the leader is P_M) correlates.
  PartyId correlator() const { return clients.back().party(); }
  bool IsCorrelator(PartyId p) const { return p == correlator(); }
  // Database 1 of the first client generates c.
  Endpoint global_origin() const { return {clients.front().party(), 1}; }
  const ClientLayout& Client(PartyId party) const;
  // Every participating client database in canonical order.
  std::vector<Endpoint> Databases() const;
};

ShareContext MakeShareContext(uint64_t session_id, const PrimeField& field,
                              int num_parties,
                              std::vector<ClientLayout> clients);

// Where protocol randomness comes from. The seeded source draws each slot
// from its own labelled stream; the audit substitutes explicit assignments.
class RandomnessSource {
 public:
  virtual ~RandomnessSource() = default;
  // s_i(partition), uniform on F_L.
  virtual FieldElement Local(PartyId party, uint32_t partition) = 0;
  // Free individual value for rank k of a non-correlating client.
  virtual FieldElement Individual(PartyId party, uint32_t rank) = 0;
  // c, uniform on F_L \ {0}.
  virtual FieldElement Global() = 0;
};

class SeededRandomness final : public RandomnessSource {
 public:
  SeededRandomness(uint64_t seed, const PrimeField& field)
      : seed_(seed), field_(field) {}

  FieldElement Local(PartyId party, uint32_t partition) override;
  FieldElement Individual(PartyId party, uint32_t rank) override;
  FieldElement Global() override;

 private:
  uint64_t seed_;
  PrimeField field_;
};

std::vector<FieldElement> GenerateLocal(PartyId party, uint32_t eta,
                                        const PrimeField& field,
                                        uint64_t seed);

FieldElement GenerateGlobal(const PrimeField& field, uint64_t seed);

struct FreeIndividual {
  // (party, rank) -> value, for every non-correlating client.
  std::map<std::pair<PartyId, uint32_t>, FieldElement> values;
  // One message per value, from the database holding the rank to the
  // correlating client's database holding the same rank.
  std::vector<Message> shares;
};

FreeIndividual GenerateIndividualFree(const ShareContext& ctx,
                                      RandomnessSource& source);

// target - sum(free) for one rank.
FieldElement CorrelateOne(FieldElement target,
                          std::span<const FieldElement> free_values);

// free_by_rank[k - 1] holds the values the other M - 2 clients drew for rank
// k. Returns the correlating client's values. Throws kProtocolViolation
// when a rank does not carry exactly `expected_shares` values.
std::vector<FieldElement> Correlate(
    std::span<const std::vector<FieldElement>> free_by_rank,
    FieldElement target, size_t expected_shares);

// R_{i,j}: the randomness resident at one client database.
struct DatabaseRandomness {
  Endpoint self;
  std::vector<FieldElement> local;                // s_i
  std::map<uint32_t, FieldElement> individual;   // rank -> t, empty for db 1
  FieldElement global = PrimeField(2).One();     // c

  friend bool operator==(const DatabaseRandomness&,
                         const DatabaseRandomness&) = default;
};

// What a database knows right after drawing its own values.
struct Origination {
  std::vector<Message> outgoing;
  std::vector<FieldElement> local;
  std::map<uint32_t, FieldElement> individual;
  std::optional<FieldElement> global;
};

Origination Originate(const ShareContext& ctx, const Endpoint& self,
                      RandomnessSource& source);

// Combines a database's own draws with the shares delivered to it. Throws
// kProtocolViolation on missing, duplicate or misaddressed shares.
DatabaseRandomness SealRandomness(const ShareContext& ctx,
                                  const Endpoint& self,
                                  const Origination& own,
                                  std::span<const Message> received);

struct ClientRandomness {
  PartyId party = 0;
  std::vector<FieldElement> local;               // s_i
  std::map<uint32_t, FieldElement> individual;  // t~_{i,k}

  friend bool operator==(const ClientRandomness&,
                         const ClientRandomness&) = default;
};

struct RandomnessBundle {
  FieldElement global = PrimeField(2).One();
  std::vector<ClientRandomness> clients;  // ascending party id

  const ClientRandomness& Client(PartyId party) const;
  DatabaseRandomness ForDatabase(const ShareContext& ctx,
                                 const Endpoint& db) const;

  friend bool operator==(const RandomnessBundle&,
                         const RandomnessBundle&) = default;
};

// Direct construction of the bundle, without messages.
RandomnessBundle ComposeBundle(const ShareContext& ctx,
                               RandomnessSource& source);

struct RandomnessPhase {
  RandomnessBundle bundle;
  std::vector<Message> messages;  // in emission order
  std::vector<DatabaseRandomness> databases;
};

// Runs the sharing phase among all client databases in canonical order.
RandomnessPhase RunRandomnessPhase(const ShareContext& ctx,
                                   RandomnessSource& source);

}  // namespace mppsi
