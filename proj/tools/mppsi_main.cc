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

// Command-line front end: run sessions, print cost tables, audit small
// instances and serve client databases over TCP.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "mppsi/audit.h"
#include "mppsi/config.h"
#include "mppsi/fixtures.h"
#include "mppsi/net.h"
#include "mppsi/session.h"

namespace mppsi {
namespace {

using Json = nlohmann::ordered_json;

// Exit code for a check or demo whose result disagrees with expectations.
constexpr int kCheckFailed = 1;

struct CommonFlags {
  std::string config;
  std::optional<uint64_t> seed;
  std::optional<PartyId> leader;
  std::string transport;
  std::string out;
  bool json = false;
};

void AddCommon(CLI::App* cmd, CommonFlags& f, bool need_config) {
  auto* c = cmd->add_option("--config", f.config, "session config (JSON)");
  if (need_config) c->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", f.seed, "override the config seed");
  cmd->add_option("--leader", f.leader, "force this party as leader");
  cmd->add_option("--transport", f.transport, "mem or net")
      ->check(CLI::IsMember({"mem", "net"}));
  cmd->add_option("--out", f.out, "write the transcript here");
  cmd->add_flag("--json", f.json, "machine-readable output");
}

SessionConfig Resolve(SessionConfig c, const CommonFlags& f) {
  if (f.seed) c.seed = *f.seed;
  if (f.leader) c.leader_override = *f.leader;
  if (f.transport == "mem") c.transport = Transport::kMemory;
  if (f.transport == "net") c.transport = Transport::kNetwork;
  return c;
}

std::string SetString(const ElementSet& s) {
  std::string out = "{";
  for (size_t i = 0; i < s.size(); ++i) {
    out += (i ? "," : "") + std::to_string(s[i]);
  }
  return out + "}";
}

Json CostJson(const CostTable& table, PartyId leader) {
  Json costs = Json::object();
  for (int t = 1; t <= table.num_parties(); ++t) {
    const auto c = table.Cost(t);
    costs[std::to_string(t)] = c ? Json(*c) : Json(nullptr);
  }
  return {{"costs", costs}, {"leader", leader}};
}

void PrintCosts(const CostTable& table, PartyId leader) {
  std::printf("candidate  D_t\n");
  for (int t = 1; t <= table.num_parties(); ++t) {
    const auto c = table.Cost(t);
    std::printf("P%-9d %s%s\n", t, c ? std::to_string(*c).c_str() : "-",
                t == leader ? "  <- leader" : "");
  }
}

std::map<Phase, size_t> PhaseCounts(const SessionTranscript& t) {
  std::map<Phase, size_t> n;
  for (const auto& m : t.messages) ++n[m.phase];
  return n;
}

Json ResultJson(const SessionTranscript& t) {
  Json phases = Json::object();
  for (const auto& [p, n] : PhaseCounts(t)) phases[PhaseName(p)] = n;
  Json ind = Json::array();
  for (const auto& [e, v] : t.result.indicators) ind.push_back({e, v.value()});
  return {{"session_id", t.session_id},
          {"modulus", t.modulus},
          {"leader", t.leader},
          {"intersection", t.result.intersection},
          {"indicators", ind},
          {"download_cost", t.download_cost_actual()},
          {"messages", phases}};
}

void PrintResult(const SessionTranscript& t) {
  std::printf("field F_%llu, leader P%u, session %016llx\n",
              static_cast<unsigned long long>(t.modulus), t.leader,
              static_cast<unsigned long long>(t.session_id));
  for (const auto& [p, n] : PhaseCounts(t)) {
    std::printf("  %-10s %zu messages\n", PhaseName(p), n);
  }
  for (const auto& [e, v] : t.result.indicators) {
    std::printf("  E_%llu = %s\n", static_cast<unsigned long long>(e),
                v.ToString().c_str());
  }
  std::printf("intersection %s\ndownload cost %llu\n",
              SetString(t.result.intersection).c_str(),
              static_cast<unsigned long long>(t.download_cost_actual()));
}

SessionTranscript Execute(const SessionConfig& c, const std::string& out) {
  auto t = RunSession(c);
  CheckTranscript(t);
  if (!out.empty()) WriteTranscript(t, out);
  return t;
}

int CmdRun(const CommonFlags& f) {
  const auto t = Execute(Resolve(LoadConfig(f.config), f), f.out);
  if (f.json) {
    std::cout << ResultJson(t).dump(2) << "\n";
  } else {
    PrintResult(t);
  }
  return 0;
}

int CmdCost(const CommonFlags& f) {
  const auto c = Resolve(LoadConfig(f.config), f);
  const auto s = PrepareSession(c);
  if (f.json) {
    std::cout << CostJson(s.table, s.leader).dump(2) << "\n";
  } else {
    PrintCosts(s.table, s.leader);
  }
  return 0;
}

int CmdDemo(const std::string& name, const CommonFlags& f) {
  const auto fx = FixtureByName(name);
  SessionConfig c{fx.instance, fx.leader, 2024, Transport::kMemory, {}};
  c = Resolve(c, f);
  const auto t = Execute(c, f.out);
  const bool ok = t.result.intersection == fx.expected_intersection &&
                  t.download_cost_actual() == fx.expected_cost;
  if (f.json) {
    Json j = ResultJson(t);
    j["costs"] = CostJson(t.table, t.leader)["costs"];
    j["expected"] = {{"intersection", fx.expected_intersection},
                     {"download_cost", fx.expected_cost}};
    j["match"] = ok;
    std::cout << j.dump(2) << "\n";
  } else {
    std::printf("demo %s\n", name.c_str());
    PrintCosts(t.table, t.leader);
    const PartyId elected = ElectLeader(fx.instance.parties).leader;
    if (elected != t.leader) {
      std::printf("minimum-cost candidate is P%u; this run uses the override "
                  "P%u\n", elected, t.leader);
    }
    PrintResult(t);
    std::printf("expected %s at cost %llu: %s\n",
                SetString(fx.expected_intersection).c_str(),
                static_cast<unsigned long long>(fx.expected_cost),
                ok ? "match" : "MISMATCH");
  }
  return ok ? 0 : kCheckFailed;
}

Json ReportJson(const CheckReport& r) {
  return {{"check", r.name},       {"pass", r.pass},
          {"exhaustive", r.exhaustive}, {"realizations", r.realizations},
          {"detail", r.detail}};
}

Json MiJson(const MutualInformation& m) {
  return {{"zero", m.zero},
          {"bits", m.bits},
          {"secrets", m.secrets},
          {"joint_outcomes", m.joint_outcomes},
          {"realizations", m.realizations}};
}

int CmdAudit(const CommonFlags& f, const std::string& check,
             const AuditOptions& base) {
  const auto c = Resolve(LoadConfig(f.config), f);
  const auto s = PrepareSession(c);
  AuditOptions opts = base;
  opts.seed = c.seed;
  const bool all = check == "all";
  bool pass = true;
  Json out = Json::array();
  auto report = [&](const CheckReport& r) {
    pass &= r.pass;
    if (f.json) {
      out.push_back(ReportJson(r));
    } else {
      std::printf("%-12s %s  %s%s\n", r.name.c_str(), r.pass ? "PASS" : "FAIL",
                  r.detail.c_str(), r.exhaustive ? "" : " (sampled)");
    }
  };
  auto mi = [&](const std::string& name, const std::string& who,
                const MutualInformation& m) {
    pass &= m.zero;
    if (f.json) {
      Json j = MiJson(m);
      j["check"] = name;
      j["view"] = who;
      out.push_back(j);
    } else {
      std::printf("%-12s %s  I = %s bits over %llu realizations (%s)\n",
                  name.c_str(), m.zero ? "PASS" : "FAIL",
                  m.zero ? "0" : std::to_string(m.bits).c_str(),
                  static_cast<unsigned long long>(m.realizations), who.c_str());
    }
  };
  if (all || check == "reliability") report(CheckReliability(s, opts));
  if (all || check == "lemma1") report(CheckDb1Uniformity(s, opts));
  if (all || check == "lemma2") report(CheckZUniformity(s, opts));
  if (all || check == "lemma3") report(CheckIndicatorPrivacy(s, opts));
  if (all || check == "leader-mi") {
    for (const auto& [db, m] : LeaderPrivacy(s, opts)) {
      mi("leader-mi", "database " + std::to_string(db.party) + "." +
                          std::to_string(db.database),
         m);
    }
  }
  if (all || check == "client-mi") mi("client-mi", "leader", ClientPrivacy(s, opts));
  if (f.json) std::cout << out.dump(2) << "\n";
  return pass ? 0 : kCheckFailed;
}

int CmdServe(const std::string& config, PartyId party, int database) {
  const auto c = LoadConfig(config);
  const auto s = PrepareSession(c);
  const Endpoint self{party, database};
  const auto it = c.endpoints.find(self);
  if (it == c.endpoints.end()) {
    Throw(ErrorCode::kConfig, "no endpoint configured for database " +
                                  std::to_string(party) + "." +
                                  std::to_string(database));
  }
  EndpointServer server(s, self, it->second);
  auto peers = c.endpoints;
  peers.erase(self);
  server.SetPeers(peers);
  server.Start();
  std::fprintf(stderr, "serving %u.%d on %s\n", party, database,
               server.address().c_str());
  if (const auto err = server.Wait()) {
    std::fprintf(stderr, "error: %s\n", err->what());
    return ExitCodeFor(err->code());
  }
  return 0;
}

int Main(int argc, char** argv) {
  CLI::App app{"Information-theoretic multi-party private set intersection"};
  app.require_subcommand(1);

  CommonFlags run_f, cost_f, audit_f, demo_f;
  auto* run = app.add_subcommand("run", "run one session");
  AddCommon(run, run_f, true);

  auto* cost = app.add_subcommand("cost", "print the download cost table");
  AddCommon(cost, cost_f, true);

  auto* audit = app.add_subcommand("audit", "exact checks on a small instance");
  AddCommon(audit, audit_f, true);
  std::string check = "all";
  AuditOptions audit_opts;
  audit->add_option("--check", check)
      ->check(CLI::IsMember({"reliability", "lemma1", "lemma2", "lemma3",
                             "leader-mi", "client-mi", "all"}));
  audit->add_option("--bound", audit_opts.bound,
                    "largest enumerated space")->check(CLI::PositiveNumber);
  audit->add_option("--samples", audit_opts.samples,
                    "seeded draws when a space is over the bound");

  auto* demo = app.add_subcommand("demo", "run a worked example");
  AddCommon(demo, demo_f, false);
  std::string demo_name;
  demo->add_option("name", demo_name)->required()->check(
      CLI::IsMember(FixtureNames()));

  auto* serve = app.add_subcommand("serve", "serve one client database");
  std::string serve_config;
  PartyId party = 0;
  int database = 0;
  serve->add_option("--config", serve_config)->required()->check(
      CLI::ExistingFile);
  serve->add_option("--party", party)->required();
  serve->add_option("--database", database)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : ExitCodeFor(ErrorCode::kInvalidArgument);
  }

  try {
    if (*run) return CmdRun(run_f);
    if (*cost) return CmdCost(cost_f);
    if (*audit) return CmdAudit(audit_f, check, audit_opts);
    if (*demo) return CmdDemo(demo_name, demo_f);
    if (*serve) return CmdServe(serve_config, party, database);
  } catch (const Error& e) {
    std::fprintf(stderr, "error (%s): %s\n", ErrorCodeName(e.code()), e.what());
    return ExitCodeFor(e.code());
  }
  return 0;
}

}  // namespace
}  // namespace mppsi

int main(int argc, char** argv) { return mppsi::Main(argc, argv); }
