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
#include <string>
#include <string_view>

#include "mppsi/message.h"
#include "mppsi/model.h"

namespace mppsi {

enum class Transport { kMemory, kNetwork };

const char* TransportName(Transport t);

struct SessionConfig {
  ProtocolInstance instance{Universe(1), {}};
  std::optional<PartyId> leader_override;
  uint64_t seed = 0;
  Transport transport = Transport::kMemory;
  // Listen address "host:port" per client database, networked only.
  std::map<Endpoint, std::string> endpoints;
};

// Parses and validates a config document. Throws kConfig with a diagnostic
// naming the offending field (e.g. "parties[1].databases: must be >= 1") or,
// for malformed text, the line and column.
SessionConfig ParseConfig(std::string_view text);
SessionConfig LoadConfig(const std::string& path);

// Canonical serialization; ParseConfig(ConfigToJson(c)) reproduces c.
std::string ConfigToJson(const SessionConfig& config);

}  // namespace mppsi
