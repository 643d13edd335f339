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
#include <initializer_list>
#include <random>

namespace mppsi {

// Stream tags for the labelled generator. Every protocol draw is addressed
// by (seed, tag, indices...) so that draws for distinct slots never share a
// stream and reruns with the same seed reproduce them exactly.
enum class DrawTag : uint64_t {
  kBaseVector = 1,
  kLocal = 2,
  kIndividual = 3,
  kGlobal = 4,
  kSession = 5,
  kSample = 6,
};

class LabeledDraw {
 public:
  LabeledDraw(uint64_t seed, DrawTag tag, std::initializer_list<uint64_t> idx);

  // Uniform on [0, bound). `bound` must be positive.
  uint64_t Below(uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

uint64_t DeriveSessionId(uint64_t seed);

}  // namespace mppsi
