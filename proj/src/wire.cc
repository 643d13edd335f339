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

#include "mppsi/wire.h"

#include <set>

namespace mppsi {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void Malformed(const std::string& what) {
  Throw(ErrorCode::kDecode, "malformed message: " + what);
}

Phase PhaseOf(MessageType t) {
  switch (t) {
    case MessageType::kLocalShare:
    case MessageType::kIndividualShare:
    case MessageType::kGlobalShare:
      return Phase::kRandomness;
    case MessageType::kQuery:
      return Phase::kQuery;
    case MessageType::kAnswer:
      return Phase::kAnswer;
    default:
      return Phase::kControl;
  }
}

uint64_t Unsigned(const json& v, const char* field) {
  if (!v.is_number_unsigned()) Malformed(std::string(field) + " not unsigned");
  return v.get<uint64_t>();
}

Endpoint EndpointFrom(const json& v, const char* field) {
  if (!v.is_array() || v.size() != 2) {
    Malformed(std::string(field) + " is not [party, database]");
  }
  const uint64_t p = Unsigned(v[0], field), d = Unsigned(v[1], field);
  if (p > 1'000'000 || d > 1'000'000) Malformed(std::string(field) + " range");
  return {static_cast<PartyId>(p), static_cast<int>(d)};
}

std::optional<uint32_t> OptionalIndex(const json& v, const char* field) {
  if (v.is_null()) return std::nullopt;
  const uint64_t x = Unsigned(v, field);
  if (x > UINT32_MAX) Malformed(std::string(field) + " range");
  return static_cast<uint32_t>(x);
}

ordered_json OptionalJson(const std::optional<uint32_t>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

}  // namespace

ordered_json MessageToJson(const Message& m) {
  ordered_json j;
  j["type"] = MessageTypeName(m.type);
  j["session_id"] = m.session_id;
  j["phase"] = PhaseName(m.phase);
  j["origin"] = {m.origin.party, m.origin.database};
  j["dest"] = {m.dest.party, m.dest.database};
  j["partition"] = OptionalJson(m.partition);
  j["target"] = OptionalJson(m.target);
  j["values"] = m.values;
  return j;
}

Message MessageFromJson(const json& j) {
  static const std::set<std::string> kFields = {
      "type", "session_id", "phase",  "origin",
      "dest", "partition",  "target", "values"};
  if (!j.is_object()) Malformed("not an object");
  for (const auto& [k, v] : j.items()) {
    if (!kFields.count(k)) Malformed("unknown field '" + k + "'");
  }
  for (const auto& k : kFields) {
    if (!j.contains(k)) Malformed("missing field '" + k + "'");
  }
  Message m;
  if (!j["type"].is_string()) Malformed("type not a string");
  auto type = ParseMessageType(j["type"].get<std::string>());
  if (!type) Malformed("unknown type '" + j["type"].get<std::string>() + "'");
  m.type = *type;
  if (!j["phase"].is_string()) Malformed("phase not a string");
  auto phase = ParsePhase(j["phase"].get<std::string>());
  if (!phase) Malformed("unknown phase");
  if (*phase != PhaseOf(m.type)) Malformed("phase does not match type");
  m.phase = *phase;
  m.session_id = Unsigned(j["session_id"], "session_id");
  m.origin = EndpointFrom(j["origin"], "origin");
  m.dest = EndpointFrom(j["dest"], "dest");
  m.partition = OptionalIndex(j["partition"], "partition");
  m.target = OptionalIndex(j["target"], "target");
  const json& values = j["values"];
  if (!values.is_array()) Malformed("values not an array");
  m.values.reserve(values.size());
  for (const auto& v : values) m.values.push_back(Unsigned(v, "values"));
  return m;
}

std::string EncodeBody(const Message& m) { return MessageToJson(m).dump(); }

Message DecodeBody(std::string_view body) {
  json j;
  try {
    j = json::parse(body.begin(), body.end());
  } catch (const json::exception& e) {
    Malformed("body is not valid JSON");
  }
  return MessageFromJson(j);
}

std::vector<uint8_t> EncodeMsg(const Message& m) {
  const std::string body = EncodeBody(m);
  if (body.size() > kMaxFrameBody) {
    Throw(ErrorCode::kInvalidArgument, "message exceeds the frame limit");
  }
  const auto n = static_cast<uint32_t>(body.size());
  std::vector<uint8_t> out = {static_cast<uint8_t>(n >> 24),
                              static_cast<uint8_t>(n >> 16),
                              static_cast<uint8_t>(n >> 8),
                              static_cast<uint8_t>(n)};
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

uint32_t FrameLength(std::span<const uint8_t, 4> h) {
  const uint32_t n = (uint32_t{h[0]} << 24) | (uint32_t{h[1]} << 16) |
                     (uint32_t{h[2]} << 8) | uint32_t{h[3]};
  if (n == 0) Throw(ErrorCode::kDecode, "zero-length frame");
  if (n > kMaxFrameBody) {
    Throw(ErrorCode::kDecode,
          "frame length " + std::to_string(n) + " exceeds 1 MiB");
  }
  return n;
}

Message DecodeMsg(std::span<const uint8_t> frame) {
  if (frame.size() < 4) Throw(ErrorCode::kDecode, "truncated frame header");
  const uint32_t n = FrameLength(frame.first<4>());
  if (frame.size() < 4 + size_t{n}) {
    Throw(ErrorCode::kDecode, "truncated frame: header announces " +
                                  std::to_string(n) + " bytes, got " +
                                  std::to_string(frame.size() - 4));
  }
  if (frame.size() > 4 + size_t{n}) {
    Throw(ErrorCode::kDecode, "trailing bytes after frame");
  }
  const auto* body = reinterpret_cast<const char*>(frame.data() + 4);
  return DecodeBody(std::string_view(body, n));
}

}  // namespace mppsi
