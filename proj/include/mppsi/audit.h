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
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "mppsi/randomness.h"
#include "mppsi/session.h"

namespace mppsi {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Exact distribution over outcomes. Realizations are enumerated with equal
// weight, so the table stores integer counts and derives probabilities.
class DistributionTable {
 public:
  using Outcome = std::vector<uint64_t>;

  void Add(const Outcome& o, uint64_t count = 1);
  const std::map<Outcome, BigInt>& counts() const { return counts_; }
  const BigInt& total() const { return total_; }
  Rational Probability(const Outcome& o) const;
  // True iff every outcome in `support` has probability 1/|support| and no
  // other outcome occurs.
  bool IsUniformOver(const std::vector<Outcome>& support) const;

  friend bool operator==(const DistributionTable&,
                         const DistributionTable&) = default;

 private:
  std::map<Outcome, BigInt> counts_;
  BigInt total_ = 0;
};

// Odometer over a mixed-radix digit vector, least significant digit first.
class MixedRadix {
 public:
  explicit MixedRadix(std::vector<uint64_t> radices);

  std::span<const uint64_t> digits() const { return digits_; }
  std::span<const uint64_t> radices() const { return radices_; }
  // Product of the radices, or nullopt past 2^64 - 1.
  std::optional<uint64_t> size() const;
  void Set(std::span<const uint64_t> digits);
  // Advances; returns false after wrapping back to all zeros.
  bool Next();

 private:
  std::vector<uint64_t> radices_;
  std::vector<uint64_t> digits_;
};

// The joint space of protocol randomness: every s_i(l) and every free
// individual value range over F_L, c over F_L \ {0}. The correlating
// client's values are functions of the others and add no digits.
class RandomnessSpace {
 public:
  enum class Kind { kLocal, kIndividual, kGlobal };
  struct Slot {
    Kind kind;
    PartyId party;     // unused for kGlobal
    uint32_t index;    // partition for kLocal, rank for kIndividual
  };

  explicit RandomnessSpace(const ShareContext& ctx);

  const std::vector<Slot>& slots() const { return slots_; }
  const std::vector<uint64_t>& radices() const { return radices_; }
  BigInt size() const;
  std::optional<size_t> LocalSlot(PartyId party, uint32_t partition) const;
  std::optional<size_t> IndividualSlot(PartyId party, uint32_t rank) const;
  size_t GlobalSlot() const { return slots_.size() - 1; }

 private:
  std::vector<Slot> slots_;
  std::vector<uint64_t> radices_;
};

// A randomness source reading one point of the space.
class AssignedRandomness final : public RandomnessSource {
 public:
  AssignedRandomness(const RandomnessSpace& space,
                     std::span<const uint64_t> digits, const PrimeField& field);

  FieldElement Local(PartyId party, uint32_t partition) override;
  FieldElement Individual(PartyId party, uint32_t rank) override;
  FieldElement Global() override;

 private:
  const RandomnessSpace& space_;
  std::span<const uint64_t> digits_;
  PrimeField field_;
};

// Throws kBoundExceeded when the space holds more than `bound` points.
void EnumerateRandomness(
    const ShareContext& ctx, uint64_t bound,
    const std::function<void(const RandomnessBundle&, const Rational&)>& fn);

struct AuditOptions {
  uint64_t bound = 10'000'000;
  // When the full context space is over the bound, this many seeded
  // contexts are drawn instead.
  uint32_t samples = 8;
  // h is enumerated jointly when (h space) x (randomness space) stays at or
  // under this bound; otherwise `samples` seeded h draws are used.
  uint64_t h_bound = 10'000'000;
  uint64_t seed = 0;
  SchemeVariant variant;
};

struct CheckReport {
  std::string name;
  bool pass = false;
  uint64_t realizations = 0;  // protocol realizations evaluated
  bool exhaustive = false;    // false when contexts or h were sampled
  std::string detail;
};

// Decode equals the brute-force intersection for every randomness
// realization and every enumerated or sampled h.
CheckReport CheckReliability(const PreparedSession& s,
                             const AuditOptions& opts = {});

// For each client, the database-1 answers are exactly uniform as s_i varies,
// for every fixed remainder (data, h, t, c).
CheckReport CheckDb1Uniformity(const PreparedSession& s,
                               const AuditOptions& opts = {});

// For each non-correlating client and rank, Z is exactly uniform over F_L
// as that client's free value varies. Vacuous with two parties.
CheckReport CheckZUniformity(const PreparedSession& s,
                             const AuditOptions& opts = {});

// For each leader element outside the intersection, E is exactly uniform
// over F_L \ {0} as c varies, with the same distribution for every client
// column summing to at most M - 2. Intersection elements give E = 0.
CheckReport CheckIndicatorPrivacy(const PreparedSession& s,
                                  const AuditOptions& opts = {});

struct MutualInformation {
  bool zero = false;  // exact independence test
  double bits = 0;    // evaluated from exact counts
  uint64_t joint_outcomes = 0;
  uint64_t secrets = 0;
  uint64_t realizations = 0;
};

// Messages of one view, flattened into an outcome key. The leader view is
// every query and answer touching the leader endpoint; a database view is
// every message with that database as origin or destination, which covers
// its queries, answers and randomness R_{i,j}.
DistributionTable::Outcome LeaderView(const SessionTranscript& t);
DistributionTable::Outcome DatabaseView(const SessionTranscript& t,
                                        const Endpoint& db);

// I(P_M ; Q_{i,j}, A_{i,j}, P_i, R_{i,j}) for every client database, with
// the leader set uniform over `candidates` (default: all subsets of the
// universe with the leader's cardinality). Enumerates candidates x h x
// randomness. Throws kBoundExceeded over opts.bound.
std::map<Endpoint, MutualInformation> LeaderPrivacy(
    const PreparedSession& s, const AuditOptions& opts = {},
    std::optional<std::vector<ElementSet>> candidates = std::nullopt);

// I(X_{P-bar} ; Q, A, P_M) with the client sets uniform over all tuples
// that share the instance's intersection: columns of intersection elements
// are all ones, columns of the other leader elements sum below M - 1, and
// columns outside the leader set are free. Enumerates tuples x h x
// randomness. Throws kBoundExceeded over opts.bound.
MutualInformation ClientPrivacy(const PreparedSession& s,
                                const AuditOptions& opts = {});

struct SuiteReport {
  uint64_t instances = 0;
  uint64_t realizations = 0;
  uint64_t max_realizations = 0;
  uint64_t failures = 0;
  std::string first_failure;
};

// Reliability over every instance with M in `parties`, universe size up to
// `max_universe`, database counts in `databases`, and all per-party subsets,
// with the elected leader.
SuiteReport ReliabilitySuite(const std::vector<int>& parties,
                             uint64_t max_universe,
                             const std::vector<int>& databases,
                             const AuditOptions& opts);

std::string ToString(const Rational& r);

}  // namespace mppsi
