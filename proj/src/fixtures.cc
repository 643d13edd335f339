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

#include "mppsi/fixtures.h"

#include "mppsi/error.h"

namespace mppsi {

Fixture Sec4Fixture() {
  return Fixture{"sec4",
                 ProtocolInstance{Universe(4),
                                  {PartyProfile(1, 3, {1, 2}),
                                   PartyProfile(2, 3, {1, 3}),
                                   PartyProfile(3, 3, {1, 4})}},
                 3,
                 {1},
                 6};
}

Fixture Sec71Fixture() {
  return Fixture{"sec7_1",
                 ProtocolInstance{Universe(4),
                                  {PartyProfile(1, 2, {1, 2}),
                                   PartyProfile(2, 2, {1, 3}),
                                   PartyProfile(3, 2, {1, 4})}},
                 3,
                 {1},
                 8};
}

Fixture Sec72Fixture() {
  return Fixture{"sec7_2",
                 ProtocolInstance{Universe(5),
                                  {PartyProfile(1, 2, {1, 2, 3, 4}),
                                   PartyProfile(2, 3, {1, 2, 4}),
                                   PartyProfile(3, 5, {1, 3, 4}),
                                   PartyProfile(4, 4, {1, 4, 5})}},
                 4,
                 {1, 4},
                 15};
}

std::vector<std::string> FixtureNames() { return {"sec4", "sec7_1", "sec7_2"}; }

Fixture FixtureByName(const std::string& name) {
  if (name == "sec4") return Sec4Fixture();
  if (name == "sec7_1") return Sec71Fixture();
  if (name == "sec7_2") return Sec72Fixture();
  Throw(ErrorCode::kInvalidArgument, "unknown demo '" + name +
                                         "'; expected sec4, sec7_1 or sec7_2");
}

}  // namespace mppsi
