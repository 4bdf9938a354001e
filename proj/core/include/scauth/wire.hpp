// Copyright 2026 The scauth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SCAUTH_WIRE_HPP
#define SCAUTH_WIRE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "scauth/common.hpp"

namespace scauth::wire {

inline constexpr std::uint8_t kVersion = 0x01;
inline constexpr std::size_t kMaxPayload = 1u << 24;
inline constexpr std::size_t kHeaderSize = 7;  // version, protocol, msg_type, be32 length

enum class ProtocolId : std::uint8_t {
    ssca = 0x01,
    pscab = 0x02,
    pscabv = 0x03,
    pscav = 0x04,
};

/// Every failure cause maps to this single opaque type with empty payload;
/// the wire never discloses why a handshake was refused.
inline constexpr std::uint8_t kMsgReject = 0xFF;
/// Server acceptance echo (payload: 8-byte session-key check tag).
inline constexpr std::uint8_t kMsgAcceptEcho = 0x7F;
/// Reversed-confirmation variant responder message; kept distinguishable from
/// the honest msg-type space so secure peers can refuse it outright.
inline constexpr std::uint8_t kMsgVariantRespond = 0x12;

std::string protocol_name(ProtocolId id);
std::optional<ProtocolId> protocol_from_name(std::string_view name);
bool known_protocol(std::uint8_t id);

struct Frame {
    std::uint8_t version = kVersion;
    std::uint8_t protocol_id = 0;
    std::uint8_t msg_type = 0;
    Bytes payload;

    bool operator==(const Frame&) const = default;
};

enum class FrameError {
    truncated,
    bad_version,
    length_mismatch,
};

/// Throws std::invalid_argument when payload exceeds kMaxPayload.
Bytes frame_encode(const Frame& f);

/// Decodes one whole frame from `in`; the buffer must contain exactly the
/// frame (trailing bytes are a length_mismatch, missing bytes a truncation).
std::variant<Frame, FrameError> frame_decode(ByteView in);

Frame reject_frame(std::uint8_t protocol_id);

}  // namespace scauth::wire

#endif  // SCAUTH_WIRE_HPP
