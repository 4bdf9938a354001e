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

#include "scauth/wire.hpp"

#include <stdexcept>

namespace scauth::wire {

std::string protocol_name(ProtocolId id) {
    switch (id) {
        case ProtocolId::ssca: return "ssca";
        case ProtocolId::pscab: return "pscab";
        case ProtocolId::pscabv: return "pscabv";
        case ProtocolId::pscav: return "pscav";
    }
    return "unknown";
}

std::optional<ProtocolId> protocol_from_name(std::string_view name) {
    if (name == "ssca") return ProtocolId::ssca;
    if (name == "pscab") return ProtocolId::pscab;
    if (name == "pscabv") return ProtocolId::pscabv;
    if (name == "pscav") return ProtocolId::pscav;
    return std::nullopt;
}

bool known_protocol(std::uint8_t id) {
    return id >= 0x01 && id <= 0x04;
}

Bytes frame_encode(const Frame& f) {
    if (f.payload.size() > kMaxPayload) throw std::invalid_argument("frame payload exceeds 2^24 bytes");
    Bytes out;
    out.reserve(kHeaderSize + f.payload.size());
    out.push_back(f.version);
    out.push_back(f.protocol_id);
    out.push_back(f.msg_type);
    put_be32(out, static_cast<std::uint32_t>(f.payload.size()));
    out.insert(out.end(), f.payload.begin(), f.payload.end());
    return out;
}

std::variant<Frame, FrameError> frame_decode(ByteView in) {
    if (in.size() < kHeaderSize) return FrameError::truncated;
    if (in[0] != kVersion) return FrameError::bad_version;
    std::uint32_t len = get_be32(in.data() + 3);
    if (len > kMaxPayload) return FrameError::length_mismatch;
    if (in.size() < kHeaderSize + len) return FrameError::truncated;
    if (in.size() > kHeaderSize + len) return FrameError::length_mismatch;
    Frame f;
    f.version = in[0];
    f.protocol_id = in[1];
    f.msg_type = in[2];
    f.payload.assign(in.begin() + kHeaderSize, in.end());
    return f;
}

Frame reject_frame(std::uint8_t protocol_id) {
    Frame f;
    f.protocol_id = protocol_id;
    f.msg_type = kMsgReject;
    return f;
}

}  // namespace scauth::wire
