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

#include <string>
#include <utility>

namespace mppsi {
namespace {

[[noreturn]] void Reject(const Endpoint& self, const std::string& what) {
  Throw(ErrorCode::kProtocolViolation, ToString(self) + ": " + what);
}

}  // namespace

FieldElement Answer(std::span<const FieldElement> x,
                    std::span<const FieldElement> q, FieldElement s,
                    FieldElement t, FieldElement c) {
  return MaskAnswer(InnerProduct(x, q), s, t, c);
}

std::vector<FieldElement> AnswerAll(
    const PartitionPlan& plan, const QueryPlan& qp,
    const RandomnessBundle& randomness,
    std::span<const std::vector<FieldElement>> data) {
  if (data.size() != plan.clients.size()) {
    Throw(ErrorCode::kInvalidArgument, "one data vector per client expected");
  }
  std::vector<FieldElement> out;
  out.reserve(qp.queries.size());
  for (const auto& q : qp.queries) {
    const size_t c = plan.ClientIndex(q.dest.party);
    const auto& r = randomness.Client(q.dest.party);
    const FieldElement s = r.local.at(q.partition - 1);
    const FieldElement t = q.rank ? r.individual.at(*q.rank) : s.field().Zero();
    out.push_back(Answer(data[c], q.vector, s, t, randomness.global));
  }
  return out;
}

ClientDatabase::ClientDatabase(const ShareContext& ctx, PartyId leader,
                               Endpoint self, std::vector<FieldElement> data)
    : ctx_(ctx),
      leader_(leader),
      self_(self),
      layout_(ctx.Client(self.party)),
      data_(std::move(data)) {
  if (self.database < 1 || self.database > layout_.used_databases()) {
    Throw(ErrorCode::kInvalidArgument,
          ToString(self) + " takes no part in the session");
  }
}

std::vector<Message> ClientDatabase::Emit(RandomnessSource& source) {
  if (own_) Reject(self_, "randomness already drawn");
  own_ = Originate(ctx_, self_, source);
  return own_->outgoing;
}

void ClientDatabase::Accept(const Message& share) {
  if (randomness_) Reject(self_, "share after seal");
  if (share.phase != Phase::kRandomness) {
    Reject(self_, std::string("unexpected ") + PhaseName(share.phase) +
                      " message during sharing");
  }
  inbox_.push_back(share);
}

void ClientDatabase::Seal() {
  if (!own_) Reject(self_, "seal before drawing randomness");
  if (randomness_) Reject(self_, "sealed twice");
  randomness_ = SealRandomness(ctx_, self_, *own_, inbox_);
  inbox_.clear();
}

const DatabaseRandomness& ClientDatabase::randomness() const {
  if (!randomness_) Reject(self_, "randomness not sealed");
  return *randomness_;
}

Message ClientDatabase::Respond(const Message& query) {
  if (!randomness_) Reject(self_, "query before randomness is sealed");
  if (query.type != MessageType::kQuery || query.phase != Phase::kQuery) {
    Reject(self_, std::string("expected a query, got ") +
                      MessageTypeName(query.type));
  }
  if (query.session_id != ctx_.session_id) {
    Reject(self_, "query carries a foreign session id");
  }
  if (!(query.dest == self_) || !(query.origin == Endpoint{leader_, 0})) {
    Reject(self_, "query from " + ToString(query.origin) + " addressed to " +
                      ToString(query.dest));
  }
  if (query.values.size() != data_.size()) {
    Reject(self_, "query length " + std::to_string(query.values.size()) +
                      ", universe size " + std::to_string(data_.size()));
  }
  for (uint64_t v : query.values) {
    if (v >= ctx_.field.modulus()) Reject(self_, "query entry out of range");
  }
  if (!query.partition || *query.partition < 1 ||
      *query.partition > layout_.num_partitions()) {
    Reject(self_, "query names no valid partition");
  }
  const uint32_t l = *query.partition;
  FieldElement t = ctx_.field.Zero();
  if (self_.database == 1) {
    if (query.target) Reject(self_, "database 1 queries carry no target");
  } else {
    const auto rank = layout_.RankAt(l, self_.database);
    if (!query.target || !rank || *query.target != *rank) {
      Reject(self_, "query target does not match partition " +
                        std::to_string(l));
    }
    t = randomness_->individual.at(*rank);
  }
  if (!answered_.insert(l).second) {
    Reject(self_, "partition " + std::to_string(l) + " queried twice");
  }
  const auto q = ctx_.field.Vector(query.values);
  const FieldElement a =
      Answer(data_, q, randomness_->local.at(l - 1), t, randomness_->global);

  Message out;
  out.type = MessageType::kAnswer;
  out.session_id = ctx_.session_id;
  out.phase = Phase::kAnswer;
  out.origin = self_;
  out.dest = {leader_, 0};
  out.partition = l;
  out.target = query.target;
  out.values = {a.value()};
  return out;
}

}  // namespace mppsi
