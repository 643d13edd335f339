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

#include <algorithm>
#include <cmath>
#include <bit>
#include <limits>
#include <sstream>

#include "mppsi/rng.h"

namespace mppsi {
namespace {

constexpr size_t kNone = std::numeric_limits<size_t>::max();

[[noreturn]] void OverBound(const std::string& what, const BigInt& size,
                            uint64_t bound) {
  Throw(ErrorCode::kBoundExceeded,
        what + " has " + size.str() + " points, over the bound of " +
            std::to_string(bound) +
            "; use a smaller instance or raise --bound");
}

BigInt Pow(uint64_t base, uint64_t exp) {
  BigInt r = 1;
  for (uint64_t i = 0; i < exp; ++i) r *= base;
  return r;
}

// Base vectors read from digits: h_l[k] = digits[(l - 1) K + k].
std::vector<std::vector<FieldElement>> BaseVectors(
    const PreparedSession& s, std::span<const uint64_t> digits,
    const SchemeVariant& v) {
  const uint64_t k = s.instance.universe.size;
  std::vector<std::vector<FieldElement>> h(s.plan.kappa());
  for (size_t l = 0; l < h.size(); ++l) {
    for (uint64_t e = 0; e < k; ++e) {
      h[l].push_back(s.field.Element(v.unmasked_queries ? 0
                                                        : digits[l * k + e]));
    }
  }
  return h;
}

std::vector<uint64_t> SampleDigits(std::span<const uint64_t> radices,
                                   uint64_t seed, uint64_t index) {
  LabeledDraw draw(seed, DrawTag::kSample, {index});
  std::vector<uint64_t> out;
  for (uint64_t r : radices) out.push_back(draw.Below(r));
  return out;
}

// Answers of one session as flat arrays aligned with the query plan. The
// inner products are cached per (data, h); randomness is read per call.
class Evaluator {
 public:
  Evaluator(const PreparedSession& s, const SchemeVariant& v)
      : s_(s),
        variant_(v),
        ctx_(VariantContext(s, v)),
        space_(s.ctx),
        qp_(BuildQueries(s.plan, s.field,
                         BaseVectors(s, std::vector<uint64_t>(h_digits(), 0),
                                     v))),
        decoder_(s.plan, qp_, s.field) {
    for (const auto& c : s.plan.clients) data_.push_back(s.Data(c.party()));
    for (const auto& q : qp_.queries) {
      slot_client_.push_back(s.plan.ClientIndex(q.dest.party));
    }
    Refresh();
  }

  const RandomnessSpace& space() const { return space_; }
  const Decoder& decoder() const { return decoder_; }
  const QueryPlan& queries() const { return qp_; }
  size_t h_digits() const {
    return s_.plan.kappa() * s_.instance.universe.size;
  }
  std::vector<uint64_t> h_radices() const {
    return std::vector<uint64_t>(h_digits(), s_.field.modulus());
  }

  void SetH(std::span<const uint64_t> digits) {
    qp_ = BuildQueries(s_.plan, s_.field, BaseVectors(s_, digits, variant_));
    Refresh();
  }
  void SetData(std::vector<std::vector<FieldElement>> data) {
    data_ = std::move(data);
    Refresh();
  }
  const std::vector<std::vector<FieldElement>>& data() const { return data_; }

  void Answers(std::span<const uint64_t> rand_digits,
               std::vector<FieldElement>& out) {
    AssignedRandomness assigned(space_, rand_digits, s_.field);
    VariantSource src(assigned, variant_, s_.field);
    const FieldElement c = src.Global();
    const uint32_t r = s_.plan.leader_set_size();
    const size_t m = s_.plan.clients.size();
    local_.assign(m, {});
    indiv_.assign(m, std::vector<FieldElement>(r, s_.field.Zero()));
    for (size_t i = 0; i < m; ++i) {
      const auto& layout = s_.plan.clients[i];
      for (uint32_t l = 1; l <= layout.num_partitions(); ++l) {
        local_[i].push_back(src.Local(layout.party(), l));
      }
    }
    for (uint32_t k = 1; k <= r; ++k) {
      FieldElement t = ctx_.correlation_target;
      for (size_t i = 0; i + 1 < m; ++i) {
        indiv_[i][k - 1] = src.Individual(s_.plan.clients[i].party(), k);
        t -= indiv_[i][k - 1];
      }
      indiv_[m - 1][k - 1] = t;
    }
    out.resize(qp_.queries.size(), s_.field.Zero());
    for (size_t slot = 0; slot < qp_.queries.size(); ++slot) {
      const auto& q = qp_.queries[slot];
      const size_t i = slot_client_[slot];
      const FieldElement t = q.rank ? indiv_[i][*q.rank - 1] : s_.field.Zero();
      out[slot] = MaskAnswer(ip_[slot], local_[i][q.partition - 1], t, c);
    }
  }

 private:
  void Refresh() {
    ip_.clear();
    for (size_t slot = 0; slot < qp_.queries.size(); ++slot) {
      ip_.push_back(
          InnerProduct(data_[slot_client_[slot]], qp_.queries[slot].vector));
    }
  }

  const PreparedSession& s_;
  SchemeVariant variant_;
  ShareContext ctx_;
  RandomnessSpace space_;
  QueryPlan qp_;
  Decoder decoder_;
  std::vector<std::vector<FieldElement>> data_;
  std::vector<size_t> slot_client_;
  std::vector<FieldElement> ip_;
  std::vector<std::vector<FieldElement>> local_;
  std::vector<std::vector<FieldElement>> indiv_;
};

// Visits contexts (h digits, randomness digits with the inner slots zeroed).
// All contexts are visited when there are at most bound / inner_size of
// them; otherwise opts.samples seeded ones. Returns whether exhaustive.
bool ForEachContext(
    const Evaluator& ev, const std::vector<size_t>& inner,
    const AuditOptions& opts,
    const std::function<void(std::span<const uint64_t>,
                             std::vector<uint64_t>&)>& fn) {
  std::vector<uint64_t> radices = ev.h_radices();
  const size_t h_count = radices.size();
  BigInt inner_size = 1;
  const auto& rr = ev.space().radices();
  for (size_t i = 0; i < rr.size(); ++i) {
    const bool is_inner =
        std::find(inner.begin(), inner.end(), i) != inner.end();
    radices.push_back(is_inner ? 1 : rr[i]);
    if (is_inner) inner_size *= rr[i];
  }
  BigInt outer = 1;
  for (uint64_t r : radices) outer *= r;
  const bool exhaustive = outer * inner_size <= opts.bound;
  std::vector<uint64_t> rand_digits;
  auto visit = [&](std::span<const uint64_t> d) {
    rand_digits.assign(d.begin() + h_count, d.end());
    fn(d.first(h_count), rand_digits);
  };
  if (exhaustive) {
    MixedRadix it(radices);
    do {
      visit(it.digits());
    } while (it.Next());
  } else {
    for (uint32_t i = 0; i < opts.samples; ++i) {
      visit(SampleDigits(radices, opts.seed, i));
    }
  }
  return exhaustive;
}

// Enumerates the inner slots of `digits` and tabulates `outcome`.
template <typename F>
DistributionTable Tabulate(Evaluator& ev, std::vector<uint64_t>& digits,
                           const std::vector<size_t>& inner, F&& outcome,
                           uint64_t& realizations) {
  std::vector<uint64_t> inner_radices;
  for (size_t i : inner) inner_radices.push_back(ev.space().radices()[i]);
  MixedRadix it(inner_radices);
  DistributionTable table;
  std::vector<FieldElement> answers;
  do {
    for (size_t j = 0; j < inner.size(); ++j) digits[inner[j]] = it.digits()[j];
    ev.Answers(digits, answers);
    table.Add(outcome(answers));
    ++realizations;
  } while (it.Next());
  return table;
}

std::vector<DistributionTable::Outcome> FieldSupport(uint64_t l, uint64_t from) {
  std::vector<DistributionTable::Outcome> out;
  for (uint64_t v = from; v < l; ++v) out.push_back({v});
  return out;
}

std::vector<DistributionTable::Outcome> TupleSupport(uint64_t l, size_t n) {
  std::vector<DistributionTable::Outcome> out;
  MixedRadix it(std::vector<uint64_t>(n, l));
  do {
    out.emplace_back(it.digits().begin(), it.digits().end());
  } while (it.Next());
  return out;
}

void AppendMessage(DistributionTable::Outcome& key, const Message& m) {
  key.push_back(static_cast<uint64_t>(m.type));
  key.push_back(m.origin.party);
  key.push_back(m.origin.database);
  key.push_back(m.dest.party);
  key.push_back(m.dest.database);
  key.push_back(m.partition.value_or(0));
  key.push_back(m.target.value_or(0));
  key.push_back(m.values.size());
  key.insert(key.end(), m.values.begin(), m.values.end());
}

// Joint counts of (secret index, view) and the independence test.
class JointCounter {
 public:
  explicit JointCounter(size_t secrets) : secrets_(secrets) {}

  void Add(size_t secret, DistributionTable::Outcome view) {
    auto& row = joint_[std::move(view)];
    if (row.empty()) row.assign(secrets_, 0);
    ++row[secret];
    ++total_;
  }

  MutualInformation Result() const {
    MutualInformation mi;
    mi.secrets = secrets_;
    mi.realizations = total_;
    mi.joint_outcomes = joint_.size();
    std::vector<uint64_t> px(secrets_, 0);
    for (const auto& [y, row] : joint_) {
      for (size_t x = 0; x < secrets_; ++x) px[x] += row[x];
    }
    mi.zero = true;
    double bits = 0;
    const BigInt n = total_;
    for (const auto& [y, row] : joint_) {
      uint64_t py = 0;
      for (uint64_t c : row) py += c;
      for (size_t x = 0; x < secrets_; ++x) {
        if (px[x] == 0) continue;
        // Independence: n_xy * N == n_x * n_y, exactly.
        if (BigInt(row[x]) * n != BigInt(px[x]) * py) mi.zero = false;
        if (row[x] == 0) continue;
        const double pxy = static_cast<double>(row[x]) / total_;
        bits += pxy * std::log2(static_cast<double>(row[x]) * total_ /
                                (static_cast<double>(px[x]) * py));
      }
    }
    mi.bits = mi.zero ? 0.0 : std::max(bits, 0.0);
    return mi;
  }

 private:
  size_t secrets_;
  std::map<DistributionTable::Outcome, std::vector<uint64_t>> joint_;
  uint64_t total_ = 0;
};

PreparedSession WithSets(const PreparedSession& s,
                         const std::vector<ElementSet>& sets) {
  ProtocolInstance inst{s.instance.universe, {}};
  for (const auto& p : s.instance.parties) {
    inst.parties.emplace_back(p.id(), p.num_databases(), sets[p.id() - 1]);
  }
  return PrepareSession(inst, s.leader, s.seed);
}

// Runs every (h, randomness) point of a session through the in-memory
// transport.
template <typename F>
void ForEachTranscript(const PreparedSession& s, const SchemeVariant& v,
                       F&& fn) {
  const RandomnessSpace space(s.ctx);
  MixedRadix hs(std::vector<uint64_t>(
      s.plan.kappa() * s.instance.universe.size, s.field.modulus()));
  do {
    const auto h = BaseVectors(s, hs.digits(), v);
    MixedRadix rs(space.radices());
    do {
      AssignedRandomness src(space, rs.digits(), s.field);
      fn(RunInMemory(s, src, h, v));
    } while (rs.Next());
  } while (hs.Next());
}

BigInt SessionPoints(const PreparedSession& s) {
  return Pow(s.field.modulus(), s.plan.kappa() * s.instance.universe.size) *
         RandomnessSpace(s.ctx).size();
}

}  // namespace

void DistributionTable::Add(const Outcome& o, uint64_t count) {
  counts_[o] += count;
  total_ += count;
}

Rational DistributionTable::Probability(const Outcome& o) const {
  auto it = counts_.find(o);
  if (it == counts_.end() || total_ == 0) return Rational(0);
  return Rational(it->second, total_);
}

bool DistributionTable::IsUniformOver(
    const std::vector<Outcome>& support) const {
  if (support.empty() || counts_.size() != support.size()) return false;
  const Rational expect(1, support.size());
  for (const auto& o : support) {
    if (Probability(o) != expect) return false;
  }
  return true;
}

MixedRadix::MixedRadix(std::vector<uint64_t> radices)
    : radices_(std::move(radices)), digits_(radices_.size(), 0) {
  for (uint64_t r : radices_) {
    if (r == 0) Throw(ErrorCode::kInvalidArgument, "zero radix");
  }
}

std::optional<uint64_t> MixedRadix::size() const {
  uint64_t n = 1;
  for (uint64_t r : radices_) {
    if (__builtin_mul_overflow(n, r, &n)) return std::nullopt;
  }
  return n;
}

void MixedRadix::Set(std::span<const uint64_t> digits) {
  digits_.assign(digits.begin(), digits.end());
}

bool MixedRadix::Next() {
  for (size_t i = 0; i < digits_.size(); ++i) {
    if (++digits_[i] < radices_[i]) return true;
    digits_[i] = 0;
  }
  return false;
}

RandomnessSpace::RandomnessSpace(const ShareContext& ctx) {
  const uint64_t l = ctx.field.modulus();
  for (const auto& c : ctx.clients) {
    for (uint32_t p = 1; p <= c.num_partitions(); ++p) {
      slots_.push_back({Kind::kLocal, c.party(), p});
      radices_.push_back(l);
    }
  }
  for (const auto& c : ctx.clients) {
    if (ctx.IsCorrelator(c.party())) continue;
    for (uint32_t k = 1; k <= c.leader_set_size(); ++k) {
      slots_.push_back({Kind::kIndividual, c.party(), k});
      radices_.push_back(l);
    }
  }
  slots_.push_back({Kind::kGlobal, 0, 0});
  radices_.push_back(l - 1);
}

BigInt RandomnessSpace::size() const {
  BigInt n = 1;
  for (uint64_t r : radices_) n *= r;
  return n;
}

std::optional<size_t> RandomnessSpace::LocalSlot(PartyId party,
                                                 uint32_t partition) const {
  for (size_t i = 0; i < slots_.size(); ++i) {
    const auto& s = slots_[i];
    if (s.kind == Kind::kLocal && s.party == party && s.index == partition) {
      return i;
    }
  }
  return std::nullopt;
}

std::optional<size_t> RandomnessSpace::IndividualSlot(PartyId party,
                                                      uint32_t rank) const {
  for (size_t i = 0; i < slots_.size(); ++i) {
    const auto& s = slots_[i];
    if (s.kind == Kind::kIndividual && s.party == party && s.index == rank) {
      return i;
    }
  }
  return std::nullopt;
}

AssignedRandomness::AssignedRandomness(const RandomnessSpace& space,
                                       std::span<const uint64_t> digits,
                                       const PrimeField& field)
    : space_(space), digits_(digits), field_(field) {
  if (digits.size() != space.slots().size()) {
    Throw(ErrorCode::kInvalidArgument, "digit count does not match the space");
  }
}

FieldElement AssignedRandomness::Local(PartyId party, uint32_t partition) {
  const auto slot = space_.LocalSlot(party, partition);
  if (!slot) Throw(ErrorCode::kInvalidArgument, "no local slot");
  return field_.Element(digits_[*slot]);
}

FieldElement AssignedRandomness::Individual(PartyId party, uint32_t rank) {
  const auto slot = space_.IndividualSlot(party, rank);
  if (!slot) Throw(ErrorCode::kInvalidArgument, "no individual slot");
  return field_.Element(digits_[*slot]);
}

FieldElement AssignedRandomness::Global() {
  return field_.Element(1 + digits_[space_.GlobalSlot()]);
}

void EnumerateRandomness(
    const ShareContext& ctx, uint64_t bound,
    const std::function<void(const RandomnessBundle&, const Rational&)>& fn) {
  const RandomnessSpace space(ctx);
  const BigInt size = space.size();
  if (size > bound) OverBound("randomness space", size, bound);
  const Rational weight(1, size);
  MixedRadix it(space.radices());
  do {
    AssignedRandomness src(space, it.digits(), ctx.field);
    fn(ComposeBundle(ctx, src), weight);
  } while (it.Next());
}

CheckReport CheckReliability(const PreparedSession& s,
                             const AuditOptions& opts) {
  CheckReport rep;
  rep.name = "reliability";
  const ElementSet expected = BruteForceIntersection(s.instance.parties);
  if (s.plan.leader_set.empty()) {
    const auto t = RunInMemory(s);
    rep.pass = t.result.intersection == expected;
    rep.realizations = 1;
    rep.exhaustive = true;
    rep.detail = "empty leader set";
    return rep;
  }
  Evaluator ev(s, opts.variant);
  const BigInt rsize = ev.space().size();
  if (rsize > opts.bound) OverBound("randomness space", rsize, opts.bound);
  const auto h_radices = ev.h_radices();
  const BigInt hsize = Pow(s.field.modulus(), h_radices.size());
  rep.exhaustive = hsize * rsize <= opts.h_bound;

  const uint32_t r = s.plan.leader_set_size();
  std::vector<bool> want(r);
  for (uint32_t k = 1; k <= r; ++k) {
    want[k - 1] = std::binary_search(expected.begin(), expected.end(),
                                     s.plan.ElementAt(k));
  }
  std::vector<FieldElement> answers, e(r, s.field.Zero());
  uint64_t failures = 0;
  auto run_h = [&](std::span<const uint64_t> h) {
    ev.SetH(h);
    MixedRadix it(ev.space().radices());
    do {
      ev.Answers(it.digits(), answers);
      ev.decoder().Indicators(answers, e);
      ++rep.realizations;
      for (uint32_t k = 0; k < r; ++k) {
        if (e[k].IsZero() != want[k]) {
          if (failures++ == 0) {
            rep.detail = "element " + std::to_string(s.plan.ElementAt(k + 1)) +
                         " decoded wrongly (E = " + e[k].ToString() + ")";
          }
          break;
        }
      }
    } while (it.Next());
  };
  if (rep.exhaustive) {
    MixedRadix hs(h_radices);
    do {
      run_h(hs.digits());
    } while (hs.Next());
  } else {
    for (uint32_t i = 0; i < opts.samples; ++i) {
      run_h(SampleDigits(h_radices, opts.seed, i));
    }
  }
  rep.pass = failures == 0;
  if (rep.pass) {
    rep.detail = "decode matched the intersection in all " +
                 std::to_string(rep.realizations) + " realizations";
  } else {
    rep.detail += "; " + std::to_string(failures) + " of " +
                  std::to_string(rep.realizations) + " realizations failed";
  }
  return rep;
}

CheckReport CheckDb1Uniformity(const PreparedSession& s,
                               const AuditOptions& opts) {
  CheckReport rep;
  rep.name = "lemma1";
  rep.pass = true;
  rep.exhaustive = true;
  if (s.plan.leader_set.empty()) {
    rep.detail = "vacuous: empty leader set";
    return rep;
  }
  Evaluator ev(s, opts.variant);
  const uint64_t l = s.field.modulus();
  Rational seen = -1;
  for (size_t c = 0; c < s.plan.clients.size(); ++c) {
    const auto& layout = s.plan.clients[c];
    std::vector<size_t> inner, db1_slots;
    for (uint32_t p = 1; p <= layout.num_partitions(); ++p) {
      inner.push_back(*ev.space().LocalSlot(layout.party(), p));
      db1_slots.push_back(
          *ev.decoder().SlotOf({layout.party(), 1}, p, std::nullopt));
    }
    const auto joint_support = TupleSupport(l, inner.size());
    const auto marginal_support = FieldSupport(l, 0);
    rep.exhaustive &= ForEachContext(
        ev, inner, opts, [&](auto h, std::vector<uint64_t>& digits) {
          if (!rep.pass) return;
          ev.SetH(h);
          const auto joint = Tabulate(
              ev, digits, inner,
              [&](const std::vector<FieldElement>& a) {
                DistributionTable::Outcome o;
                for (size_t slot : db1_slots) o.push_back(a[slot].value());
                return o;
              },
              rep.realizations);
          bool ok = joint.IsUniformOver(joint_support);
          for (size_t p = 0; p < inner.size() && ok; ++p) {
            DistributionTable marginal;
            for (const auto& [o, n] : joint.counts()) {
              marginal.Add({o[p]}, static_cast<uint64_t>(n));
            }
            ok = marginal.IsUniformOver(marginal_support);
            seen = marginal.Probability({0});
          }
          if (!ok) {
            rep.pass = false;
            rep.detail = "party " + std::to_string(layout.party()) +
                         ": database-1 answers are not uniform as s varies";
          }
        });
  }
  if (rep.pass) {
    rep.detail = "every database-1 answer takes each value with probability " +
                 ToString(seen);
  }
  return rep;
}

CheckReport CheckZUniformity(const PreparedSession& s,
                             const AuditOptions& opts) {
  CheckReport rep;
  rep.name = "lemma2";
  rep.pass = true;
  rep.exhaustive = true;
  if (s.plan.clients.size() < 2) {
    rep.detail = "vacuous: two parties, no free individual randomness";
    return rep;
  }
  if (s.plan.leader_set.empty()) {
    rep.detail = "vacuous: empty leader set";
    return rep;
  }
  Evaluator ev(s, opts.variant);
  const uint64_t l = s.field.modulus();
  const uint32_t r = s.plan.leader_set_size();
  const auto support = FieldSupport(l, 0);
  Rational seen = -1;
  std::vector<FieldElement> z(s.plan.clients.size() * r, s.field.Zero());
  for (size_t c = 0; c + 1 < s.plan.clients.size(); ++c) {
    const PartyId party = s.plan.clients[c].party();
    for (uint32_t k = 1; k <= r; ++k) {
      const std::vector<size_t> inner = {*ev.space().IndividualSlot(party, k)};
      rep.exhaustive &= ForEachContext(
          ev, inner, opts, [&](auto h, std::vector<uint64_t>& digits) {
            if (!rep.pass) return;
            ev.SetH(h);
            const auto table = Tabulate(
                ev, digits, inner,
                [&](const std::vector<FieldElement>& a) {
                  ev.decoder().Differences(a, z);
                  return DistributionTable::Outcome{z[c * r + k - 1].value()};
                },
                rep.realizations);
            seen = table.Probability({0});
            if (!table.IsUniformOver(support)) {
              rep.pass = false;
              rep.detail = "party " + std::to_string(party) + ", element " +
                           std::to_string(s.plan.ElementAt(k)) +
                           ": Z is not uniform as t varies";
            }
          });
    }
  }
  if (rep.pass) {
    rep.detail = "every Z of a non-correlating client takes each value with "
                 "probability " + ToString(seen);
  }
  return rep;
}

CheckReport CheckIndicatorPrivacy(const PreparedSession& s,
                                  const AuditOptions& opts) {
  CheckReport rep;
  rep.name = "lemma3";
  rep.pass = true;
  rep.exhaustive = true;
  if (s.plan.leader_set.empty()) {
    rep.detail = "vacuous: empty leader set";
    return rep;
  }
  Evaluator ev(s, opts.variant);
  const auto base_data = ev.data();
  const uint64_t l = s.field.modulus();
  const size_t m = s.plan.clients.size();
  const uint32_t r = s.plan.leader_set_size();
  const ElementSet inter = BruteForceIntersection(s.instance.parties);
  const std::vector<size_t> inner = {ev.space().GlobalSlot()};
  const auto nonzero = FieldSupport(l, 1);
  const std::vector<DistributionTable::Outcome> zero = {{0}};
  std::vector<FieldElement> e(r, s.field.Zero());
  Rational seen = -1;
  std::set<uint64_t> sums_seen;

  for (uint32_t k = 1; k <= r; ++k) {
    const ElementId y = s.plan.ElementAt(k);
    const bool in_p = std::binary_search(inter.begin(), inter.end(), y);
    // Client column patterns to substitute at y.
    std::vector<std::vector<uint8_t>> patterns;
    if (in_p) {
      patterns.push_back(std::vector<uint8_t>(m, 1));
    } else {
      MixedRadix it(std::vector<uint64_t>(m, 2));
      do {
        uint64_t sum = 0;
        for (uint64_t b : it.digits()) sum += b;
        if (sum < m) {
          patterns.emplace_back(it.digits().begin(), it.digits().end());
        }
      } while (it.Next());
    }
    rep.exhaustive &= ForEachContext(
        ev, inner, opts, [&](auto h, std::vector<uint64_t>& digits) {
          if (!rep.pass) return;
          ev.SetH(h);
          std::optional<DistributionTable> first;
          for (const auto& pattern : patterns) {
            auto data = base_data;
            uint64_t sum = 0;
            for (size_t c = 0; c < m; ++c) {
              data[c][y - 1] = s.field.Element(pattern[c]);
              sum += pattern[c];
            }
            ev.SetData(std::move(data));
            const auto table = Tabulate(
                ev, digits, inner,
                [&](const std::vector<FieldElement>& a) {
                  ev.decoder().Indicators(a, e);
                  return DistributionTable::Outcome{e[k - 1].value()};
                },
                rep.realizations);
            if (in_p) {
              if (!table.IsUniformOver(zero)) {
                rep.pass = false;
                rep.detail = "intersection element " + std::to_string(y) +
                             " has a nonzero indicator";
              }
              continue;
            }
            sums_seen.insert(sum);
            seen = table.Probability({1});
            if (!table.IsUniformOver(nonzero)) {
              rep.pass = false;
              rep.detail = "element " + std::to_string(y) +
                           ": E is not uniform on nonzero values for column "
                           "sum " + std::to_string(sum);
            } else if (first && !(table == *first)) {
              rep.pass = false;
              rep.detail = "element " + std::to_string(y) +
                           ": E depends on the client column";
            }
            if (!first) first = table;
          }
          ev.SetData(base_data);
        });
  }
  if (rep.pass) {
    std::ostringstream os;
    os << "intersection indicators vanish; other indicators take each "
          "nonzero value with probability "
       << (seen < 0 ? std::string("-") : ToString(seen))
       << " for column sums {";
    bool comma = false;
    for (uint64_t v : sums_seen) {
      os << (comma ? "," : "") << v;
      comma = true;
    }
    os << "}";
    rep.detail = os.str();
  }
  return rep;
}

DistributionTable::Outcome LeaderView(const SessionTranscript& t) {
  const Endpoint leader{t.leader, 0};
  DistributionTable::Outcome key;
  for (const auto& m : t.messages) {
    const bool touches = m.origin == leader || m.dest == leader;
    if (!touches) continue;
    if (m.phase != Phase::kQuery && m.phase != Phase::kAnswer) {
      Throw(ErrorCode::kProtocolViolation,
            "leader view holds a " + std::string(PhaseName(m.phase)) +
                " message");
    }
    AppendMessage(key, m);
  }
  return key;
}

DistributionTable::Outcome DatabaseView(const SessionTranscript& t,
                                        const Endpoint& db) {
  DistributionTable::Outcome key;
  for (const auto& m : t.messages) {
    if (m.origin == db || m.dest == db) AppendMessage(key, m);
  }
  return key;
}

std::map<Endpoint, MutualInformation> LeaderPrivacy(
    const PreparedSession& s, const AuditOptions& opts,
    std::optional<std::vector<ElementSet>> candidates) {
  const uint64_t k = s.instance.universe.size;
  const uint64_t r = s.plan.leader_set_size();
  if (!candidates) {
    candidates.emplace();
    MixedRadix it(std::vector<uint64_t>(k, 2));
    do {
      ElementSet set;
      for (uint64_t e = 0; e < k; ++e) {
        if (it.digits()[e]) set.push_back(e + 1);
      }
      if (set.size() == r) candidates->push_back(set);
    } while (it.Next());
  }
  const BigInt points = SessionPoints(s) * candidates->size();
  if (points > opts.bound) OverBound("leader-privacy joint space", points, opts.bound);

  std::map<Endpoint, JointCounter> counters;
  for (const auto& db : s.ctx.Databases()) counters.emplace(db, candidates->size());
  for (size_t x = 0; x < candidates->size(); ++x) {
    if ((*candidates)[x].size() != r) {
      Throw(ErrorCode::kInvalidArgument, "candidate leader sets must share |P_M|");
    }
    std::vector<ElementSet> sets;
    for (const auto& p : s.instance.parties) sets.push_back(p.data_set());
    sets[s.leader - 1] = (*candidates)[x];
    const auto cand = WithSets(s, sets);
    ForEachTranscript(cand, opts.variant, [&](const SessionTranscript& t) {
      for (auto& [db, counter] : counters) counter.Add(x, DatabaseView(t, db));
    });
  }
  std::map<Endpoint, MutualInformation> out;
  for (const auto& [db, counter] : counters) out.emplace(db, counter.Result());
  return out;
}

MutualInformation ClientPrivacy(const PreparedSession& s,
                                const AuditOptions& opts) {
  const uint64_t k = s.instance.universe.size;
  const size_t m = s.plan.clients.size();
  const ElementSet inter = BruteForceIntersection(s.instance.parties);
  const auto& leader_set = s.plan.leader_set;
  // Allowed column patterns per element.
  std::vector<std::vector<uint64_t>> columns(k);
  for (uint64_t e = 1; e <= k; ++e) {
    const bool in_p = std::binary_search(inter.begin(), inter.end(), e);
    const bool in_leader =
        std::binary_search(leader_set.begin(), leader_set.end(), e);
    for (uint64_t bits = 0; bits < (uint64_t{1} << m); ++bits) {
      const auto ones = static_cast<uint64_t>(std::popcount(bits));
      const bool allowed = in_p ? ones == m : (!in_leader || ones < m);
      if (allowed) columns[e - 1].push_back(bits);
    }
  }
  std::vector<uint64_t> radices;
  BigInt tuples = 1;
  for (const auto& c : columns) {
    radices.push_back(c.size());
    tuples *= c.size();
  }
  const BigInt points = SessionPoints(s) * tuples;
  if (points > opts.bound) OverBound("client-privacy joint space", points, opts.bound);

  JointCounter counter(static_cast<size_t>(tuples));
  MixedRadix it(radices);
  size_t x = 0;
  do {
    std::vector<ElementSet> sets(s.instance.num_parties());
    sets[s.leader - 1] = leader_set;
    for (uint64_t e = 1; e <= k; ++e) {
      const uint64_t bits = columns[e - 1][it.digits()[e - 1]];
      for (size_t c = 0; c < m; ++c) {
        if (bits >> c & 1) sets[s.plan.clients[c].party() - 1].push_back(e);
      }
    }
    const auto tuple = WithSets(s, sets);
    ForEachTranscript(tuple, opts.variant, [&](const SessionTranscript& t) {
      counter.Add(x, LeaderView(t));
    });
    ++x;
  } while (it.Next());
  return counter.Result();
}

SuiteReport ReliabilitySuite(const std::vector<int>& parties,
                             uint64_t max_universe,
                             const std::vector<int>& databases,
                             const AuditOptions& opts) {
  SuiteReport rep;
  for (int m : parties) {
    for (uint64_t k = 1; k <= max_universe; ++k) {
      std::vector<uint64_t> radices;
      for (int i = 0; i < m; ++i) {
        radices.push_back(databases.size());
        radices.push_back(uint64_t{1} << k);
      }
      MixedRadix it(radices);
      do {
        ProtocolInstance inst{Universe(k), {}};
        for (int i = 0; i < m; ++i) {
          const int n = databases[it.digits()[2 * i]];
          const uint64_t mask = it.digits()[2 * i + 1];
          ElementSet set;
          for (uint64_t e = 0; e < k; ++e) {
            if (mask >> e & 1) set.push_back(e + 1);
          }
          inst.parties.emplace_back(i + 1, n, std::move(set));
        }
        const auto s = PrepareSession(inst, std::nullopt, opts.seed);
        const auto one = CheckReliability(s, opts);
        ++rep.instances;
        rep.realizations += one.realizations;
        rep.max_realizations = std::max(rep.max_realizations, one.realizations);
        if (!one.pass) {
          if (rep.failures++ == 0) {
            rep.first_failure = ConfigToJson({inst, std::nullopt, opts.seed,
                                              Transport::kMemory, {}}) +
                                one.detail;
          }
        }
      } while (it.Next());
    }
  }
  return rep;
}

std::string ToString(const Rational& r) {
  const auto num = boost::multiprecision::numerator(r);
  const auto den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

}  // namespace mppsi
