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

#include "mppsi/field.h"

#include <sstream>

namespace mppsi {

PrimeField::PrimeField(uint64_t modulus) : modulus_(modulus) {
  if (!IsPrime(modulus)) {
    Throw(ErrorCode::kInvalidArgument,
          "field modulus " + std::to_string(modulus) + " is not prime");
  }
}

namespace {

uint64_t MulMod(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

uint64_t PowMod(uint64_t b, uint64_t e, uint64_t m) {
  uint64_t r = 1 % m;
  for (b %= m; e; e >>= 1, b = MulMod(b, b, m)) {
    if (e & 1) r = MulMod(r, b, m);
  }
  return r;
}

}  // namespace

// Miller-Rabin; the first twelve prime bases are deterministic below 2^64.
bool PrimeField::IsPrime(uint64_t n) {
  if (n < 2) return false;
  static constexpr uint64_t kBases[] = {2,  3,  5,  7,  11, 13,
                                        17, 19, 23, 29, 31, 37};
  for (uint64_t p : kBases) {
    if (n % p == 0) return n == p;
  }
  uint64_t d = n - 1;
  int r = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++r;
  }
  for (uint64_t a : kBases) {
    uint64_t x = PowMod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r && composite; ++i) {
      x = MulMod(x, x, n);
      composite = x != n - 1;
    }
    if (composite) return false;
  }
  return true;
}

FieldElement PrimeField::Element(uint64_t value) const {
  return FieldElement(value % modulus_, modulus_);
}

FieldElement PrimeField::Zero() const { return FieldElement(0, modulus_); }

FieldElement PrimeField::One() const {
  return FieldElement(1 % modulus_, modulus_);
}

std::vector<FieldElement> PrimeField::Vector(
    std::span<const uint64_t> values) const {
  std::vector<FieldElement> out;
  out.reserve(values.size());
  for (uint64_t v : values) out.push_back(Element(v));
  return out;
}

PrimeField SelectFieldSize(int num_parties) {
  if (num_parties < 2) {
    Throw(ErrorCode::kInvalidPartyCount,
          "need at least 2 parties, got " + std::to_string(num_parties));
  }
  uint64_t candidate = static_cast<uint64_t>(num_parties);
  while (!PrimeField::IsPrime(candidate)) ++candidate;
  return PrimeField(candidate);
}

FieldElement FieldElement::Inverse() const {
  if (value_ == 0) Throw(ErrorCode::kInvalidArgument, "zero has no inverse");
  // Fermat: a^(L-2).
  FieldElement base = *this;
  FieldElement result(1 % modulus_, modulus_);
  for (uint64_t e = modulus_ - 2; e > 0; e >>= 1) {
    if (e & 1) result *= base;
    base *= base;
  }
  return result;
}

void FieldElement::ThrowMismatch(uint64_t a, uint64_t b) {
  std::ostringstream os;
  os << "field mismatch: F_" << a << " vs F_" << b;
  Throw(ErrorCode::kFieldMismatch, os.str());
}

FieldElement InnerProduct(std::span<const FieldElement> x,
                          std::span<const FieldElement> q) {
  if (x.size() != q.size()) {
    Throw(ErrorCode::kInvalidArgument,
          "inner product length mismatch: " + std::to_string(x.size()) +
              " vs " + std::to_string(q.size()));
  }
  if (x.empty()) {
    Throw(ErrorCode::kInvalidArgument, "inner product of empty vectors");
  }
  FieldElement acc = x[0] * q[0];
  for (size_t k = 1; k < x.size(); ++k) acc += x[k] * q[k];
  return acc;
}

}  // namespace mppsi
