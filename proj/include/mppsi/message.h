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

#include "mppsi/model.h"

namespace mppsi {

// A database endpoint (party, database). Database 0 names the party itself;
// the leader sends and receives as database 0.
struct Endpoint {
  PartyId party = 0;
  int database = 0;

  friend auto operator<=>(const Endpoint&, const Endpoint&) = default;
};

std::string ToString(const Endpoint& e);

enum class Phase { kRandomness, kQuery, kAnswer, kControl };

enum class MessageType {
  // Randomness phase, client database to client database.
  kLocalShare,       // s_i from database 1 to the other databases of party i
  kIndividualShare,  // one free t-value routed to the correlating party
  kGlobalShare,      // the multiplier c
  // Query and answer phases.
  kQuery,
  kAnswer,
  // Session control on the networked transport.
  kStart,
  kSeal,
  kEnd,
  kAck,
  kError,
};

const char* PhaseName(Phase p);
const char* MessageTypeName(MessageType t);
// Return nullopt for unknown names.
std::optional<Phase> ParsePhase(const std::string& s);
std::optional<MessageType> ParseMessageType(const std::string& s);

// The single message shape carried on every transport and logged in
// transcripts.
//
// `partition` is the 1-based partition index of a query or answer. `target`
// is the 1-based rank k of the leader-set element Y_k that a query retrieves
// (absent for database-1 queries) or that an individual share is aligned to.
// Element labels never leave the leader: ranks are derivable from the public
// set size and database counts.
struct Message {
  MessageType type = MessageType::kQuery;
  uint64_t session_id = 0;
  Phase phase = Phase::kQuery;
  Endpoint origin;
  Endpoint dest;
  std::optional<uint32_t> partition;
  std::optional<uint32_t> target;
  std::vector<uint64_t> values;

  friend auto operator<=>(const Message&, const Message&) = default;
};

}  // namespace mppsi
