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
#include <optional>
#include <string>
#include <vector>

#include "mppsi/client.h"
#include "mppsi/config.h"
#include "mppsi/field.h"
#include "mppsi/leader.h"
#include "mppsi/message.h"
#include "mppsi/randomness.h"

namespace mppsi {

// Deliberate breakages of the scheme, used as negative controls by the
// audit. The default value runs the protocol as designed.
struct SchemeVariant {
  bool disable_global = false;     // c = 1
  bool zero_local = false;         // s = 0
  bool zero_individual = false;    // every t = 0
  bool break_correlation = false;  // t-sum misses the target by one
  bool unmasked_queries = false;   // h = 0

  bool is_default() const {
    return !disable_global && !zero_local && !zero_individual &&
           !break_correlation && !unmasked_queries;
  }
  friend bool operator==(const SchemeVariant&, const SchemeVariant&) = default;
};

// Applies a variant on top of another randomness source.
class VariantSource final : public RandomnessSource {
 public:
  VariantSource(RandomnessSource& base, const SchemeVariant& v,
                const PrimeField& field)
      : base_(base), variant_(v), field_(field) {}

  FieldElement Local(PartyId party, uint32_t partition) override;
  FieldElement Individual(PartyId party, uint32_t rank) override;
  FieldElement Global() override;

 private:
  RandomnessSource& base_;
  SchemeVariant variant_;
  PrimeField field_;
};

// Everything public about a session once the leader is fixed.
struct PreparedSession {
  ProtocolInstance instance{Universe(1), {}};
  PrimeField field{2};
  CostTable table;
  PartyId leader = 0;
  uint64_t session_id = 0;
  uint64_t seed = 0;
  PartitionPlan plan;
  ShareContext ctx;

  std::vector<PartyProfile> Clients() const;
  // Embedded incidence vector of a party.
  std::vector<FieldElement> Data(PartyId party) const;
};

// Elects the leader (or applies the override), builds the partition plan and
// the sharing context. Throws kInfeasible when the chosen leader has a
// counterpart with a single database.
PreparedSession PrepareSession(const SessionConfig& config);
PreparedSession PrepareSession(const ProtocolInstance& instance,
                               std::optional<PartyId> leader, uint64_t seed);

// Context with the variant's correlation target applied.
ShareContext VariantContext(const PreparedSession& s, const SchemeVariant& v);
std::vector<std::vector<FieldElement>> VariantBaseVectors(
    const PreparedSession& s, const SchemeVariant& v);

struct SessionTranscript {
  uint64_t session_id = 0;
  uint64_t modulus = 0;
  PartyId leader = 0;
  CostTable table;
  std::vector<Message> messages;  // randomness, then queries, then answers
  IntersectionResult result;

  uint64_t download_cost_actual() const;
};

// Single-threaded, deterministic run over the in-memory transport. Messages
// are delivered FIFO; randomness shares only ever reach client databases.
SessionTranscript RunInMemory(const PreparedSession& s,
                              RandomnessSource& source,
                              std::vector<std::vector<FieldElement>> h,
                              const SchemeVariant& variant = {});
// Seeded randomness and base vectors.
SessionTranscript RunInMemory(const PreparedSession& s);

// Runs over the configured transport.
SessionTranscript RunSession(const SessionConfig& config);

// Checks the structural invariants of a transcript: phase order, topology
// (no leader traffic while sharing, no client-to-client traffic afterwards),
// one answer per query, and cost equal to the answer count. Throws
// kProtocolViolation naming the first breach.
void CheckTranscript(const SessionTranscript& t);

std::string TranscriptToJson(const SessionTranscript& t);
void WriteTranscript(const SessionTranscript& t, const std::string& path);

}  // namespace mppsi
