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

#include "mppsi/rng.h"

#include <limits>
#include <vector>

namespace mppsi {
namespace {

void PushWord(std::vector<uint32_t>& words, uint64_t w) {
  words.push_back(static_cast<uint32_t>(w));
  words.push_back(static_cast<uint32_t>(w >> 32));
}

}  // namespace

LabeledDraw::LabeledDraw(uint64_t seed, DrawTag tag,
                         std::initializer_list<uint64_t> idx) {
  std::vector<uint32_t> words;
  PushWord(words, seed);
  PushWord(words, static_cast<uint64_t>(tag));
  PushWord(words, idx.size());
  for (uint64_t i : idx) PushWord(words, i);
  std::seed_seq seq(words.begin(), words.end());
  engine_.seed(seq);
}

uint64_t LabeledDraw::Below(uint64_t bound) {
  // Rejection sampling keeps the result exactly uniform and independent of
  // the standard library's distribution implementation.
  const uint64_t max = std::numeric_limits<uint64_t>::max();
  const uint64_t limit = max - (max % bound + 1) % bound;
  uint64_t x;
  do {
    x = engine_();
  } while (x > limit);
  return x % bound;
}

uint64_t DeriveSessionId(uint64_t seed) {
  return LabeledDraw(seed, DrawTag::kSession, {}).Below(
      std::numeric_limits<uint64_t>::max());
}

}  // namespace mppsi
