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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "mppsi/message.h"

namespace mppsi {

// Frames are a 4-byte big-endian body length followed by a UTF-8 JSON object
// {type, session_id, phase, origin, dest, partition, target, values}.
inline constexpr size_t kMaxFrameBody = size_t{1} << 20;

nlohmann::ordered_json MessageToJson(const Message& m);
// Throws kDecode on unknown or missing fields, wrong types, or a phase that
// does not match the message type.
Message MessageFromJson(const nlohmann::json& j);

std::string EncodeBody(const Message& m);
Message DecodeBody(std::string_view body);

std::vector<uint8_t> EncodeMsg(const Message& m);
// Decodes exactly one complete frame. Throws kDecode on a zero or oversized
// length, a truncated frame, trailing bytes, or a malformed body.
Message DecodeMsg(std::span<const uint8_t> frame);

// Validates the 4-byte header and returns the body length.
uint32_t FrameLength(std::span<const uint8_t, 4> header);

}  // namespace mppsi
