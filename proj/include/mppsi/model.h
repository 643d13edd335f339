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
#include <span>
#include <vector>

#include "mppsi/field.h"

namespace mppsi {

using PartyId = int;
// Elements of the universe S_K = {1, ..., K}.
using ElementId = uint64_t;
using ElementSet = std::vector<ElementId>;  // sorted, duplicate-free

struct Universe {
  // Throws kInvalidArgument for size 0.
  explicit Universe(uint64_t size);

  uint64_t size;

  bool Contains(ElementId e) const { return e >= 1 && e <= size; }
  friend bool operator==(const Universe&, const Universe&) = default;
};

// A party: its id in [1, M], its number of replicated databases N_i and its
// data set P_i. The cardinality of P_i is treated as public.
class PartyProfile {
 public:
  // Sorts `data_set`; throws kInvalidArgument on duplicates, id < 1,
  // num_databases < 1, or element 0.
  PartyProfile(PartyId id, int num_databases, ElementSet data_set);

  PartyId id() const { return id_; }
  int num_databases() const { return num_databases_; }
  const ElementSet& data_set() const { return data_set_; }
  uint64_t cardinality() const { return data_set_.size(); }
  bool Holds(ElementId e) const;

  friend bool operator==(const PartyProfile&, const PartyProfile&) = default;

 private:
  PartyId id_;
  int num_databases_;
  ElementSet data_set_;
};

// X_i: bit k-1 is set iff element k is in the data set.
class IncidenceVector {
 public:
  explicit IncidenceVector(std::vector<uint8_t> bits);

  size_t size() const { return bits_.size(); }
  bool Has(ElementId e) const { return bits_.at(e - 1) != 0; }
  const std::vector<uint8_t>& bits() const { return bits_; }

  std::vector<FieldElement> Embed(const PrimeField& field) const;
  ElementSet ToSet() const;

  friend bool operator==(const IncidenceVector&,
                         const IncidenceVector&) = default;

 private:
  std::vector<uint8_t> bits_;
};

// Throws kInvalidArgument if an element lies outside the universe.
IncidenceVector ToIncidence(const PartyProfile& party, const Universe& universe);

ElementSet BruteForceIntersection(std::span<const PartyProfile> parties);

// A complete protocol input: the universe plus every party's profile, with
// ids 1..M in order.
struct ProtocolInstance {
  Universe universe;
  std::vector<PartyProfile> parties;

  int num_parties() const { return static_cast<int>(parties.size()); }
  // Throws kInvalidArgument for an unknown id.
  const PartyProfile& Party(PartyId id) const;
  // Throws kConfig unless ids are 1..M and all sets fit the universe.
  void Validate() const;
};

}  // namespace mppsi
