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

#include <optional>
#include <string>
#include <vector>

#include "mppsi/model.h"

namespace mppsi {

// The worked instances shipped with the demo subcommand.
struct Fixture {
  std::string name;
  ProtocolInstance instance;
  std::optional<PartyId> leader;  // override; empty means elect
  ElementSet expected_intersection;
  uint64_t expected_cost = 0;
};

// Three parties with three databases each over {1..4}; party 3 leads.
Fixture Sec4Fixture();
// The same sets with two databases per party.
Fixture Sec71Fixture();
// Four parties with 2, 3, 5 and 4 databases over {1..5}; party 4 leads by
// override although party 2 has the lower download cost.
Fixture Sec72Fixture();

std::vector<std::string> FixtureNames();
// Throws kInvalidArgument for an unknown name.
Fixture FixtureByName(const std::string& name);

}  // namespace mppsi
