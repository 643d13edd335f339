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

#include <algorithm>
#include <string>

namespace mppsi {

Universe::Universe(uint64_t size) : size(size) {
  if (size == 0) Throw(ErrorCode::kInvalidArgument, "universe size must be >= 1");
}

PartyProfile::PartyProfile(PartyId id, int num_databases, ElementSet data_set)
    : id_(id), num_databases_(num_databases), data_set_(std::move(data_set)) {
  if (id_ < 1) {
    Throw(ErrorCode::kInvalidArgument,
          "party id must be >= 1, got " + std::to_string(id_));
  }
  if (num_databases_ < 1) {
    Throw(ErrorCode::kInvalidArgument,
          "party " + std::to_string(id_) + ": databases must be >= 1");
  }
  std::sort(data_set_.begin(), data_set_.end());
  if (std::adjacent_find(data_set_.begin(), data_set_.end()) !=
      data_set_.end()) {
    Throw(ErrorCode::kInvalidArgument,
          "party " + std::to_string(id_) + ": duplicate element in data set");
  }
  if (!data_set_.empty() && data_set_.front() == 0) {
    Throw(ErrorCode::kInvalidArgument,
          "party " + std::to_string(id_) + ": elements are 1-based");
  }
}

bool PartyProfile::Holds(ElementId e) const {
  return std::binary_search(data_set_.begin(), data_set_.end(), e);
}

IncidenceVector::IncidenceVector(std::vector<uint8_t> bits)
    : bits_(std::move(bits)) {
  for (auto& b : bits_) {
    if (b > 1) Throw(ErrorCode::kInvalidArgument, "incidence bits are 0/1");
  }
}

std::vector<FieldElement> IncidenceVector::Embed(
    const PrimeField& field) const {
  std::vector<FieldElement> out;
  out.reserve(bits_.size());
  for (uint8_t b : bits_) out.push_back(field.Element(b));
  return out;
}

ElementSet IncidenceVector::ToSet() const {
  ElementSet out;
  for (size_t k = 0; k < bits_.size(); ++k) {
    if (bits_[k]) out.push_back(k + 1);
  }
  return out;
}

IncidenceVector ToIncidence(const PartyProfile& party,
                            const Universe& universe) {
  std::vector<uint8_t> bits(universe.size, 0);
  for (ElementId e : party.data_set()) {
    if (!universe.Contains(e)) {
      Throw(ErrorCode::kInvalidArgument,
            "party " + std::to_string(party.id()) + ": element " +
                std::to_string(e) + " outside universe of size " +
                std::to_string(universe.size));
    }
    bits[e - 1] = 1;
  }
  return IncidenceVector(std::move(bits));
}

ElementSet BruteForceIntersection(std::span<const PartyProfile> parties) {
  if (parties.empty()) return {};
  ElementSet acc = parties[0].data_set();
  for (size_t i = 1; i < parties.size(); ++i) {
    ElementSet next;
    const auto& other = parties[i].data_set();
    std::set_intersection(acc.begin(), acc.end(), other.begin(), other.end(),
                          std::back_inserter(next));
    acc = std::move(next);
  }
  return acc;
}

const PartyProfile& ProtocolInstance::Party(PartyId id) const {
  if (id < 1 || id > num_parties()) {
    Throw(ErrorCode::kInvalidArgument, "unknown party " + std::to_string(id));
  }
  return parties[id - 1];
}

void ProtocolInstance::Validate() const {
  for (size_t i = 0; i < parties.size(); ++i) {
    const auto& p = parties[i];
    if (p.id() != static_cast<PartyId>(i + 1)) {
      Throw(ErrorCode::kConfig, "party ids must be contiguous from 1; entry " +
                                    std::to_string(i) + " has id " +
                                    std::to_string(p.id()));
    }
    for (ElementId e : p.data_set()) {
      if (!universe.Contains(e)) {
        Throw(ErrorCode::kConfig,
              "party " + std::to_string(p.id()) + ": element " +
                  std::to_string(e) + " outside universe of size " +
                  std::to_string(universe.size));
      }
    }
  }
}

}  // namespace mppsi
