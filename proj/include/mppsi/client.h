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
#include <set>
#include <optional>
#include <span>
#include <vector>

#include "mppsi/field.h"
#include "mppsi/leader.h"
#include "mppsi/message.h"
#include "mppsi/randomness.h"

namespace mppsi {

// A = c (ip + s + t) for a precomputed inner product ip = <x, q>.
inline FieldElement MaskAnswer(FieldElement ip, FieldElement s, FieldElement t,
                               FieldElement c) {
  return c * (ip + s + t);
}

// A = c (<x, q> + s + t). Database 1 passes t = 0.
FieldElement Answer(std::span<const FieldElement> x,
                    std::span<const FieldElement> q, FieldElement s,
                    FieldElement t, FieldElement c);

// Answers every query in `qp` with the data and randomness of the matching
// client. `data[c]` is the embedded incidence vector of plan.clients[c].
// The result is aligned with qp.queries.
std::vector<FieldElement> AnswerAll(
    const PartitionPlan& plan, const QueryPlan& qp,
    const RandomnessBundle& randomness,
    std::span<const std::vector<FieldElement>> data);

// One replicated database of a client party. It takes part in the sharing
// phase, then answers the leader's queries with its sealed randomness.
class ClientDatabase {
 public:
  ClientDatabase(const ShareContext& ctx, PartyId leader, Endpoint self,
                 std::vector<FieldElement> data);

  const Endpoint& self() const { return self_; }

  // Draws this database's own values and returns the shares it sends.
  std::vector<Message> Emit(RandomnessSource& source);
  // Buffers a share addressed to this database.
  void Accept(const Message& share);
  // Throws kProtocolViolation if shares are missing or inconsistent.
  void Seal();
  bool sealed() const { return randomness_.has_value(); }
  const DatabaseRandomness& randomness() const;

  // Validates a query and returns the answer message. Throws
  // kProtocolViolation for anything this database would not have been sent.
  Message Respond(const Message& query);

 private:
  ShareContext ctx_;
  PartyId leader_;
  Endpoint self_;
  ClientLayout layout_;
  std::vector<FieldElement> data_;
  std::optional<Origination> own_;
  std::vector<Message> inbox_;
  std::optional<DatabaseRandomness> randomness_;
  std::set<uint32_t> answered_;
};

}  // namespace mppsi
