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

#include "mppsi/message.h"

#include <array>
#include <utility>

namespace mppsi {
namespace {

constexpr std::array<std::pair<Phase, const char*>, 4> kPhases{{
    {Phase::kRandomness, "randomness"},
    {Phase::kQuery, "query"},
    {Phase::kAnswer, "answer"},
    {Phase::kControl, "control"},
}};

constexpr std::array<std::pair<MessageType, const char*>, 10> kTypes{{
    {MessageType::kLocalShare, "local"},
    {MessageType::kIndividualShare, "individual"},
    {MessageType::kGlobalShare, "global"},
    {MessageType::kQuery, "query"},
    {MessageType::kAnswer, "answer"},
    {MessageType::kStart, "start"},
    {MessageType::kSeal, "seal"},
    {MessageType::kEnd, "end"},
    {MessageType::kAck, "ack"},
    {MessageType::kError, "error"},
}};

}  // namespace

std::string ToString(const Endpoint& e) {
  return "(" + std::to_string(e.party) + "," + std::to_string(e.database) +
         ")";
}

const char* PhaseName(Phase p) {
  for (const auto& [k, v] : kPhases) {
    if (k == p) return v;
  }
  return "?";
}

const char* MessageTypeName(MessageType t) {
  for (const auto& [k, v] : kTypes) {
    if (k == t) return v;
  }
  return "?";
}

std::optional<Phase> ParsePhase(const std::string& s) {
  for (const auto& [k, v] : kPhases) {
    if (s == v) return k;
  }
  return std::nullopt;
}

std::optional<MessageType> ParseMessageType(const std::string& s) {
  for (const auto& [k, v] : kTypes) {
    if (s == v) return k;
  }
  return std::nullopt;
}

}  // namespace mppsi
