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

#include "mppsi/config.h"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace mppsi {
namespace {

using nlohmann::json;

[[noreturn]] void Bad(const std::string& path, const std::string& what) {
  Throw(ErrorCode::kConfig, path + ": " + what);
}

void OnlyKeys(const json& obj, const std::string& path,
              const std::set<std::string>& allowed) {
  if (!obj.is_object()) Bad(path, "expected an object");
  for (const auto& [k, v] : obj.items()) {
    if (!allowed.count(k)) Bad(path + "." + k, "unknown field");
  }
}

const json& Required(const json& obj, const std::string& path,
                     const std::string& key) {
  auto it = obj.find(key);
  if (it == obj.end()) Bad(path + "." + key, "missing required field");
  return *it;
}

uint64_t Unsigned(const json& v, const std::string& path) {
  if (!v.is_number_unsigned()) {
    Bad(path, "expected a non-negative integer");
  }
  return v.get<uint64_t>();
}

int SmallInt(const json& v, const std::string& path) {
  const uint64_t x = Unsigned(v, path);
  if (x > 1'000'000) Bad(path, "value too large");
  return static_cast<int>(x);
}

std::pair<int, int> LineColumn(std::string_view text, size_t byte) {
  int line = 1, col = 1;
  for (size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

bool ValidAddress(const std::string& a) {
  const auto colon = a.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == a.size()) {
    return false;
  }
  const std::string port = a.substr(colon + 1);
  if (port.size() > 5) return false;
  for (char c : port) {
    if (c < '0' || c > '9') return false;
  }
  return std::stoul(port) <= 65535;
}

}  // namespace

const char* TransportName(Transport t) {
  return t == Transport::kMemory ? "mem" : "net";
}

SessionConfig ParseConfig(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = LineColumn(text, e.byte == 0 ? 0 : e.byte - 1);
    Throw(ErrorCode::kConfig, "malformed config at line " +
                                  std::to_string(line) + ", column " +
                                  std::to_string(col));
  }
  OnlyKeys(doc, "config",
           {"universe_size", "parties", "leader", "seed", "transport"});

  SessionConfig cfg;
  const uint64_t k = Unsigned(Required(doc, "config", "universe_size"),
                              "universe_size");
  if (k == 0) Bad("universe_size", "must be >= 1");
  if (k > (uint64_t{1} << 20)) Bad("universe_size", "must be <= 1048576");

  const json& parties = Required(doc, "config", "parties");
  if (!parties.is_array()) Bad("parties", "expected an array");
  if (parties.size() < 2) Bad("parties", "need at least 2 parties");

  std::vector<PartyProfile> profiles;
  std::set<PartyId> ids;
  for (size_t i = 0; i < parties.size(); ++i) {
    const std::string path = "parties[" + std::to_string(i) + "]";
    const json& p = parties[i];
    OnlyKeys(p, path, {"id", "databases", "set", "endpoints"});
    const int id = SmallInt(Required(p, path, "id"), path + ".id");
    if (id < 1) Bad(path + ".id", "must be >= 1");
    if (!ids.insert(id).second) {
      Bad(path + ".id", "duplicate party id " + std::to_string(id));
    }
    const int n = SmallInt(Required(p, path, "databases"), path + ".databases");
    if (n < 1) Bad(path + ".databases", "must be >= 1");
    const json& set = Required(p, path, "set");
    if (!set.is_array()) Bad(path + ".set", "expected an array");
    ElementSet elems;
    std::set<ElementId> seen;
    for (size_t e = 0; e < set.size(); ++e) {
      const std::string epath = path + ".set[" + std::to_string(e) + "]";
      const uint64_t v = Unsigned(set[e], epath);
      if (v < 1 || v > k) {
        Bad(epath, "element " + std::to_string(v) + " outside universe 1.." +
                       std::to_string(k));
      }
      if (!seen.insert(v).second) {
        Bad(epath, "duplicate element " + std::to_string(v));
      }
      elems.push_back(v);
    }
    profiles.emplace_back(id, n, std::move(elems));
    if (auto it = p.find("endpoints"); it != p.end()) {
      if (!it->is_array() || it->size() != static_cast<size_t>(n)) {
        Bad(path + ".endpoints",
            "expected one address per database (" + std::to_string(n) + ")");
      }
      for (int j = 0; j < n; ++j) {
        const std::string apath = path + ".endpoints[" + std::to_string(j) + "]";
        const json& a = (*it)[j];
        if (!a.is_string() || !ValidAddress(a.get<std::string>())) {
          Bad(apath, "expected \"host:port\"");
        }
        cfg.endpoints[{id, j + 1}] = a.get<std::string>();
      }
    }
  }
  std::sort(profiles.begin(), profiles.end(),
            [](const auto& a, const auto& b) { return a.id() < b.id(); });
  for (size_t i = 0; i < profiles.size(); ++i) {
    if (profiles[i].id() != static_cast<PartyId>(i + 1)) {
      Bad("parties", "ids must be contiguous from 1; missing id " +
                         std::to_string(i + 1));
    }
  }
  cfg.instance = ProtocolInstance{Universe(k), std::move(profiles)};
  cfg.instance.Validate();

  if (auto it = doc.find("leader"); it != doc.end() && !it->is_null()) {
    const int t = SmallInt(*it, "leader");
    if (t < 1 || t > cfg.instance.num_parties()) {
      Bad("leader", "no party with id " + std::to_string(t));
    }
    cfg.leader_override = t;
  }
  if (auto it = doc.find("seed"); it != doc.end()) {
    cfg.seed = Unsigned(*it, "seed");
  }
  if (auto it = doc.find("transport"); it != doc.end()) {
    if (*it == "mem") {
      cfg.transport = Transport::kMemory;
    } else if (*it == "net") {
      cfg.transport = Transport::kNetwork;
    } else {
      Bad("transport", "expected \"mem\" or \"net\"");
    }
  }
  return cfg;
}

SessionConfig LoadConfig(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Throw(ErrorCode::kConfig, "cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ParseConfig(ss.str());
}

std::string ConfigToJson(const SessionConfig& config) {
  nlohmann::ordered_json doc;
  doc["universe_size"] = config.instance.universe.size;
  doc["parties"] = nlohmann::ordered_json::array();
  for (const auto& p : config.instance.parties) {
    nlohmann::ordered_json entry;
    entry["id"] = p.id();
    entry["databases"] = p.num_databases();
    entry["set"] = p.data_set();
    std::vector<std::string> addrs;
    for (int j = 1; j <= p.num_databases(); ++j) {
      auto it = config.endpoints.find({p.id(), j});
      if (it != config.endpoints.end()) addrs.push_back(it->second);
    }
    if (!addrs.empty()) entry["endpoints"] = addrs;
    doc["parties"].push_back(std::move(entry));
  }
  if (config.leader_override) doc["leader"] = *config.leader_override;
  doc["seed"] = config.seed;
  doc["transport"] = TransportName(config.transport);
  return doc.dump(2) + "\n";
}

}  // namespace mppsi
