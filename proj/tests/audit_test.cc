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

#include "mppsi/audit.h"

#include <set>

#include "gtest/gtest.h"
#include "mppsi/fixtures.h"

namespace mppsi {
namespace {

ProtocolInstance Make(uint64_t k, std::vector<std::pair<int, ElementSet>> ps) {
  ProtocolInstance inst{Universe(k), {}};
  PartyId id = 1;
  for (auto& [n, set] : ps) inst.parties.emplace_back(id++, n, set);
  return inst;
}

PreparedSession Sec4() {
  const auto f = Sec4Fixture();
  return PrepareSession(f.instance, f.leader, 11);
}

TEST(MixedRadixTest, VisitsEveryTupleOnce) {
  MixedRadix it({2, 3, 1, 2});
  EXPECT_EQ(it.size(), 12u);
  std::set<std::vector<uint64_t>> seen;
  do {
    seen.emplace(it.digits().begin(), it.digits().end());
  } while (it.Next());
  EXPECT_EQ(seen.size(), 12u);
  EXPECT_EQ(*seen.rbegin(), (std::vector<uint64_t>{1, 2, 0, 1}));
  EXPECT_FALSE(MixedRadix(std::vector<uint64_t>(70, 2)).size());
}

TEST(DistributionTableTest, ExactUniformity) {
  DistributionTable t;
  t.Add({0});
  t.Add({1});
  t.Add({2});
  EXPECT_TRUE(t.IsUniformOver({{0}, {1}, {2}}));
  EXPECT_FALSE(t.IsUniformOver({{0}, {1}}));
  EXPECT_EQ(t.Probability({1}), Rational(1, 3));
  t.Add({2});
  EXPECT_FALSE(t.IsUniformOver({{0}, {1}, {2}}));
  EXPECT_EQ(ToString(t.Probability({2})), "1/2");
}

TEST(RandomnessSpaceTest, Sizes) {
  const auto s = Sec4();
  // Locals 3 * 3, P1 individual shares 3 * 3, c in {1, 2}.
  EXPECT_EQ(RandomnessSpace(s.ctx).size(), 162);
  const auto two = PrepareSession(Make(1, {{2, {1}}, {2, {1}}}), 2, 0);
  EXPECT_EQ(two.field.modulus(), 2u);
  EXPECT_EQ(RandomnessSpace(two.ctx).size(), 2);
}

TEST(RandomnessSpaceTest, EnumerationMatchesOracle) {
  const auto s = Sec4();
  uint64_t count = 0;
  Rational mass = 0;
  std::set<std::string> distinct;
  EnumerateRandomness(s.ctx, 1000, [&](const RandomnessBundle& b,
                                       const Rational& w) {
    ++count;
    mass += w;
    std::string key = b.global.ToString() + ";";
    for (const auto& c : b.clients) {
      for (const auto& v : c.local) key += v.ToString() + ",";
      for (const auto& [r, v] : c.individual) key += v.ToString() + ",";
      key += ";";
    }
    distinct.insert(key);
  });
  EXPECT_EQ(count, 162u);
  EXPECT_EQ(mass, 1);
  EXPECT_EQ(distinct.size(), 162u);
  try {
    EnumerateRandomness(s.ctx, 10, [](const auto&, const auto&) {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBoundExceeded);
  }
}

TEST(AuditTest, ReliabilityIsExhaustiveOnSmallInstances) {
  const auto r = CheckReliability(Sec4());
  EXPECT_TRUE(r.pass) << r.detail;
  EXPECT_TRUE(r.exhaustive);
  EXPECT_EQ(r.realizations, 81u * 162u);
}

TEST(AuditTest, ReliabilitySamplesLargeHSpace) {
  const auto f = Sec71Fixture();
  const auto s = PrepareSession(f.instance, f.leader, 3);
  AuditOptions opts;
  opts.samples = 3;
  opts.h_bound = 100'000;
  const auto r = CheckReliability(s, opts);
  EXPECT_TRUE(r.pass) << r.detail;
  EXPECT_FALSE(r.exhaustive);
  // Locals 3^4, one free share per rank 3^2, c in {1, 2}.
  EXPECT_EQ(r.realizations, 3u * 1458u);
  opts.bound = 1000;
  try {
    CheckReliability(s, opts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBoundExceeded);
  }
}

TEST(AuditTest, LemmaChecksPass) {
  const auto s = Sec4();
  for (const auto& r : {CheckDb1Uniformity(s), CheckZUniformity(s),
                        CheckIndicatorPrivacy(s)}) {
    EXPECT_TRUE(r.pass) << r.name << ": " << r.detail;
    EXPECT_TRUE(r.exhaustive) << r.name;
    EXPECT_GT(r.realizations, 0u) << r.name;
  }
  EXPECT_NE(CheckDb1Uniformity(s).detail.find("1/3"), std::string::npos);
  EXPECT_NE(CheckIndicatorPrivacy(s).detail.find("1/2"), std::string::npos);
}

TEST(AuditTest, LemmaOneOverBinaryField) {
  const auto s = PrepareSession(Make(2, {{2, {1, 2}}, {2, {1}}}), 2, 0);
  ASSERT_EQ(s.field.modulus(), 2u);
  const auto r = CheckDb1Uniformity(s);
  EXPECT_TRUE(r.pass) << r.detail;
  EXPECT_NE(r.detail.find("1/2"), std::string::npos);
}

TEST(AuditTest, LemmaThreeSampledOnHeterogeneousExample) {
  const auto f = Sec72Fixture();
  AuditOptions opts;
  opts.samples = 2;
  const auto r = CheckIndicatorPrivacy(
      PrepareSession(f.instance, f.leader, 1), opts);
  EXPECT_TRUE(r.pass) << r.detail;
  EXPECT_FALSE(r.exhaustive);
  EXPECT_NE(r.detail.find("1/4"), std::string::npos);
  EXPECT_NE(r.detail.find("{0,1,2}"), std::string::npos);
}

TEST(AuditTest, LemmaTwoIsVacuousForTwoParties) {
  const auto s = PrepareSession(Make(2, {{3, {1, 2}}, {3, {1}}}), 2, 0);
  const auto r = CheckZUniformity(s);
  EXPECT_TRUE(r.pass);
  EXPECT_NE(r.detail.find("vacuous"), std::string::npos);
}

TEST(AuditTest, NegativeControlsFail) {
  const auto s = Sec4();
  AuditOptions opts;
  opts.variant.zero_local = true;
  EXPECT_FALSE(CheckDb1Uniformity(s, opts).pass);
  opts.variant = {};
  opts.variant.zero_individual = true;
  EXPECT_FALSE(CheckZUniformity(s, opts).pass);
  opts.variant = {};
  opts.variant.disable_global = true;
  EXPECT_FALSE(CheckIndicatorPrivacy(s, opts).pass);
  opts.variant = {};
  opts.variant.break_correlation = true;
  EXPECT_FALSE(CheckReliability(s, opts).pass);
}

TEST(AuditTest, LeaderPrivacyIsExact) {
  const auto s =
      PrepareSession(Make(3, {{3, {1, 2}}, {3, {2, 3}}, {3, {2}}}), 3, 0);
  ASSERT_EQ(s.field.modulus(), 3u);
  const auto mi = LeaderPrivacy(s);
  EXPECT_EQ(mi.size(), 4u);  // R = 1 uses two databases per client
  for (const auto& [db, m] : mi) {
    EXPECT_TRUE(m.zero) << db.party << "." << db.database;
    EXPECT_EQ(m.bits, 0.0);
    EXPECT_EQ(m.secrets, 3u);
  }
  AuditOptions opts;
  opts.variant.unmasked_queries = true;
  bool leaked = false;
  for (const auto& [db, m] : LeaderPrivacy(s, opts)) {
    leaked |= !m.zero && m.bits > 0;
  }
  EXPECT_TRUE(leaked);
}

TEST(AuditTest, ClientPrivacyIsExact) {
  for (const auto& set : {ElementSet{1, 2}, ElementSet{1, 3}}) {
    const uint64_t k = set.back();
    const auto s =
        PrepareSession(Make(k, {{3, {1}}, {3, {1}}, {3, set}}), 3, 0);
    const auto mi = ClientPrivacy(s);
    EXPECT_TRUE(mi.zero) << k;
    EXPECT_GT(mi.secrets, 1u);
    AuditOptions opts;
    opts.variant.disable_global = true;
    EXPECT_FALSE(ClientPrivacy(s, opts).zero) << k;
  }
}

// Two leader elements outside the intersection share the same c, so the
// leader learns whether their column sums agree.
TEST(AuditTest, SharedGlobalLeaksRatios) {
  const auto s = PrepareSession(Make(2, {{3, {}}, {3, {}}, {3, {1, 2}}}), 3, 0);
  const auto mi = ClientPrivacy(s);
  EXPECT_FALSE(mi.zero);
  EXPECT_GT(mi.bits, 0.0);
}

TEST(AuditTest, LeaderViewRejectsShareMessages) {
  auto t = RunInMemory(Sec4());
  EXPECT_NO_THROW(LeaderView(t));
  t.messages.front().dest = {t.leader, 0};
  EXPECT_THROW(LeaderView(t), Error);
}

TEST(AuditTest, SmallSuite) {
  AuditOptions opts;
  opts.samples = 2;
  const auto rep = ReliabilitySuite({2, 3}, 2, {2, 3}, opts);
  EXPECT_EQ(rep.failures, 0u) << rep.first_failure;
  // (2 * 2^1 + 2 * 2^2)^M summed over M.
  EXPECT_EQ(rep.instances, 4u * 4 + 8 * 8 + 4u * 4 * 4 + 8 * 8 * 8);
}

}  // namespace
}  // namespace mppsi
