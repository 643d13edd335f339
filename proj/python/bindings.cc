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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "mppsi/audit.h"
#include "mppsi/config.h"
#include "mppsi/field.h"
#include "mppsi/fixtures.h"
#include "mppsi/session.h"

namespace py = pybind11;

namespace mppsi {
namespace {

SessionConfig Load(const std::string& config_json, std::optional<uint64_t> seed,
                   std::optional<PartyId> leader,
                   std::optional<std::string> transport) {
  SessionConfig c = ParseConfig(config_json);
  if (seed) c.seed = *seed;
  if (leader) c.leader_override = *leader;
  if (transport) {
    if (*transport == "mem") {
      c.transport = Transport::kMemory;
    } else if (*transport == "net") {
      c.transport = Transport::kNetwork;
    } else {
      Throw(ErrorCode::kInvalidArgument, "transport must be mem or net");
    }
  }
  return c;
}

py::dict Costs(const CostTable& table) {
  py::dict d;
  for (int t = 1; t <= table.num_parties(); ++t) {
    const auto c = table.Cost(t);
    d[py::int_(t)] = c ? py::object(py::int_(*c)) : py::object(py::none());
  }
  return d;
}

py::dict Result(const SessionTranscript& t) {
  py::list ind;
  for (const auto& [e, v] : t.result.indicators) {
    ind.append(py::make_tuple(e, v.value()));
  }
  py::dict d;
  d["leader"] = t.leader;
  d["modulus"] = t.modulus;
  d["session_id"] = t.session_id;
  d["intersection"] = t.result.intersection;
  d["indicators"] = ind;
  d["download_cost"] = t.download_cost_actual();
  d["costs"] = Costs(t.table);
  d["messages"] = t.messages.size();
  d["transcript"] = TranscriptToJson(t);
  return d;
}

py::dict Report(const CheckReport& r) {
  py::dict d;
  d["check"] = r.name;
  d["passed"] = r.pass;
  d["exhaustive"] = r.exhaustive;
  d["realizations"] = r.realizations;
  d["detail"] = r.detail;
  return d;
}

py::dict Mi(const MutualInformation& m) {
  py::dict d;
  d["zero"] = m.zero;
  d["bits"] = m.bits;
  d["secrets"] = m.secrets;
  d["realizations"] = m.realizations;
  return d;
}

}  // namespace
}  // namespace mppsi

PYBIND11_MODULE(_mppsi, m) {
  using namespace mppsi;
  m.doc() = "Information-theoretic multi-party private set intersection";

  static py::exception<Error> error(m, "MppsiError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error)(e.what());
      exc.attr("code") = ErrorCodeName(e.code());
      exc.attr("exit_code") = ExitCodeFor(e.code());
      PyErr_SetObject(error.ptr(), exc.ptr());
    }
  });

  m.def(
      "field_size",
      [](int num_parties) { return SelectFieldSize(num_parties).modulus(); },
      py::arg("num_parties"), "Smallest prime at least the party count.");

  m.def(
      "cost_table",
      [](const std::string& config, std::optional<PartyId> leader) {
        const auto s = PrepareSession(Load(config, std::nullopt, leader,
                                           std::nullopt));
        py::dict d;
        d["costs"] = Costs(s.table);
        d["leader"] = s.leader;
        return d;
      },
      py::arg("config"), py::arg("leader") = py::none(),
      "Download cost per candidate leader and the chosen leader.");

  m.def(
      "run",
      [](const std::string& config, std::optional<uint64_t> seed,
         std::optional<PartyId> leader, std::optional<std::string> transport) {
        const auto c = Load(config, seed, leader, transport);
        SessionTranscript t;
        {
          py::gil_scoped_release release;
          t = RunSession(c);
          CheckTranscript(t);
        }
        return Result(t);
      },
      py::arg("config"), py::arg("seed") = py::none(),
      py::arg("leader") = py::none(), py::arg("transport") = py::none(),
      "Runs one session from a JSON config document.");

  m.def(
      "demo",
      [](const std::string& name) {
        const auto f = FixtureByName(name);
        const auto t = RunInMemory(PrepareSession(f.instance, f.leader, 2024));
        py::dict d = Result(t);
        d["expected_intersection"] = f.expected_intersection;
        d["expected_cost"] = f.expected_cost;
        return d;
      },
      py::arg("name"));

  m.def("demo_names", &FixtureNames);

  m.def(
      "audit",
      [](const std::string& config, const std::string& check, uint64_t bound,
         uint32_t samples) {
        const auto c = Load(config, std::nullopt, std::nullopt, std::nullopt);
        const auto s = PrepareSession(c);
        AuditOptions opts;
        opts.bound = bound;
        opts.samples = samples;
        opts.seed = c.seed;
        CheckReport r;
        {
          py::gil_scoped_release release;
          if (check == "reliability") {
            r = CheckReliability(s, opts);
          } else if (check == "lemma1") {
            r = CheckDb1Uniformity(s, opts);
          } else if (check == "lemma2") {
            r = CheckZUniformity(s, opts);
          } else if (check == "lemma3") {
            r = CheckIndicatorPrivacy(s, opts);
          } else {
            Throw(ErrorCode::kInvalidArgument, "unknown check " + check);
          }
        }
        return Report(r);
      },
      py::arg("config"), py::arg("check"), py::arg("bound") = 10'000'000,
      py::arg("samples") = 8);

  m.def(
      "client_privacy",
      [](const std::string& config, uint64_t bound) {
        const auto s = PrepareSession(
            Load(config, std::nullopt, std::nullopt, std::nullopt));
        AuditOptions opts;
        opts.bound = bound;
        MutualInformation mi;
        {
          py::gil_scoped_release release;
          mi = ClientPrivacy(s, opts);
        }
        return Mi(mi);
      },
      py::arg("config"), py::arg("bound") = 10'000'000);

  m.def(
      "leader_privacy",
      [](const std::string& config, uint64_t bound) {
        const auto s = PrepareSession(
            Load(config, std::nullopt, std::nullopt, std::nullopt));
        AuditOptions opts;
        opts.bound = bound;
        std::map<Endpoint, MutualInformation> mi;
        {
          py::gil_scoped_release release;
          mi = LeaderPrivacy(s, opts);
        }
        py::dict d;
        for (const auto& [db, v] : mi) {
          d[py::make_tuple(db.party, db.database)] = Mi(v);
        }
        return d;
      },
      py::arg("config"), py::arg("bound") = 10'000'000);
}
