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

#include "mppsi/model.h"

#include <vector>

#include "gtest/gtest.h"

namespace mppsi {
namespace {

TEST(PartyProfileTest, SortsAndQueries) {
  PartyProfile p(2, 3, {4, 1, 3});
  EXPECT_EQ(p.data_set(), (ElementSet{1, 3, 4}));
  EXPECT_EQ(p.cardinality(), 3u);
  EXPECT_TRUE(p.Holds(3));
  EXPECT_FALSE(p.Holds(2));
}

TEST(PartyProfileTest, RejectsMalformedInput) {
  EXPECT_THROW(PartyProfile(0, 2, {}), Error);
  EXPECT_THROW(PartyProfile(1, 0, {}), Error);
  EXPECT_THROW(PartyProfile(1, 2, {2, 2}), Error);
  EXPECT_THROW(PartyProfile(1, 2, {0, 1}), Error);
}

TEST(IncidenceVectorTest, RoundTrip) {
  Universe u(5);
  PartyProfile p(1, 2, {2, 5});
  auto x = ToIncidence(p, u);
  EXPECT_EQ(x.bits(), (std::vector<uint8_t>{0, 1, 0, 0, 1}));
  EXPECT_TRUE(x.Has(5));
  EXPECT_FALSE(x.Has(1));
  EXPECT_EQ(x.ToSet(), p.data_set());
  auto embedded = x.Embed(PrimeField(3));
  ASSERT_EQ(embedded.size(), 5u);
  EXPECT_EQ(embedded[1].value(), 1u);
  EXPECT_EQ(embedded[0].value(), 0u);
}

TEST(IncidenceVectorTest, OutsideUniverse) {
  try {
    ToIncidence(PartyProfile(1, 2, {6}), Universe(5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
  EXPECT_THROW(Universe(0), Error);
}

TEST(BruteForceIntersectionTest, ThreeParties) {
  std::vector<PartyProfile> parties = {PartyProfile(1, 3, {1, 2, 3}),
                                       PartyProfile(2, 3, {1, 2}),
                                       PartyProfile(3, 3, {1, 3})};
  EXPECT_EQ(BruteForceIntersection(parties), (ElementSet{1}));
  parties.push_back(PartyProfile(4, 2, {}));
  EXPECT_TRUE(BruteForceIntersection(parties).empty());
}

TEST(ProtocolInstanceTest, Validate) {
  ProtocolInstance ok{Universe(3),
                      {PartyProfile(1, 2, {1}), PartyProfile(2, 2, {3})}};
  EXPECT_NO_THROW(ok.Validate());
  EXPECT_EQ(ok.Party(2).data_set(), (ElementSet{3}));

  ProtocolInstance gap{Universe(3),
                       {PartyProfile(1, 2, {1}), PartyProfile(3, 2, {3})}};
  try {
    gap.Validate();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
  }
  ProtocolInstance wide{Universe(2),
                        {PartyProfile(1, 2, {1}), PartyProfile(2, 2, {3})}};
  EXPECT_THROW(wide.Validate(), Error);
}

}  // namespace
}  // namespace mppsi
