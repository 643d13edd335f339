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
#include <string>
#include <vector>

#include "mppsi/error.h"

namespace mppsi {

class FieldElement;

// The prime field F_L. Moduli are limited to 64-bit primes; the protocol only
// needs the smallest prime at least as large as the number of parties.
class PrimeField {
 public:
  // Throws kInvalidArgument unless `modulus` is a prime.
  explicit PrimeField(uint64_t modulus);

  static bool IsPrime(uint64_t n);

  uint64_t modulus() const { return modulus_; }

  // Reduces `value` modulo L.
  FieldElement Element(uint64_t value) const;
  FieldElement Zero() const;
  FieldElement One() const;

  std::vector<FieldElement> Vector(std::span<const uint64_t> values) const;

  friend bool operator==(const PrimeField&, const PrimeField&) = default;

 private:
  uint64_t modulus_;
};

// Smallest prime L with L >= num_parties. Throws kInvalidPartyCount for
// fewer than two parties.
PrimeField SelectFieldSize(int num_parties);

class FieldElement {
 public:
  uint64_t value() const { return value_; }
  uint64_t modulus() const { return modulus_; }
  PrimeField field() const { return PrimeField(modulus_); }
  bool IsZero() const { return value_ == 0; }

  // Multiplicative inverse; throws kInvalidArgument for zero.
  FieldElement Inverse() const;

  friend FieldElement operator+(FieldElement a, FieldElement b) {
    CheckSameField(a, b);
    uint64_t s = a.value_ + b.value_;
    // Both operands are < L <= 2^64 - 59, so a wrap means s >= L.
    if (s < a.value_ || s >= a.modulus_) s -= a.modulus_;
    return FieldElement(s, a.modulus_);
  }
  friend FieldElement operator-(FieldElement a, FieldElement b) {
    CheckSameField(a, b);
    uint64_t d = a.value_ >= b.value_ ? a.value_ - b.value_
                                      : a.modulus_ - (b.value_ - a.value_);
    return FieldElement(d, a.modulus_);
  }
  friend FieldElement operator*(FieldElement a, FieldElement b) {
    CheckSameField(a, b);
    auto p = static_cast<unsigned __int128>(a.value_) * b.value_;
    return FieldElement(static_cast<uint64_t>(p % a.modulus_), a.modulus_);
  }
  FieldElement operator-() const {
    return FieldElement(value_ == 0 ? 0 : modulus_ - value_, modulus_);
  }
  FieldElement& operator+=(FieldElement o) { return *this = *this + o; }
  FieldElement& operator-=(FieldElement o) { return *this = *this - o; }
  FieldElement& operator*=(FieldElement o) { return *this = *this * o; }

  friend bool operator==(const FieldElement&, const FieldElement&) = default;

  std::string ToString() const { return std::to_string(value_); }

 private:
  friend class PrimeField;
  FieldElement(uint64_t value, uint64_t modulus)
      : value_(value), modulus_(modulus) {}

  static void CheckSameField(const FieldElement& a, const FieldElement& b) {
    if (a.modulus_ != b.modulus_) [[unlikely]] {
      ThrowMismatch(a.modulus_, b.modulus_);
    }
  }
  [[noreturn]] static void ThrowMismatch(uint64_t a, uint64_t b);

  uint64_t value_;
  uint64_t modulus_;
};

// Sum_k x_k * q_k over F_L. Throws kInvalidArgument on length mismatch and
// kFieldMismatch when the operands live in different fields.
FieldElement InnerProduct(std::span<const FieldElement> x,
                          std::span<const FieldElement> q);

}  // namespace mppsi
