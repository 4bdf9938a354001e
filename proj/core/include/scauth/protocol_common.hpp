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

#ifndef SCAUTH_PROTOCOL_COMMON_HPP
#define SCAUTH_PROTOCOL_COMMON_HPP

#include <cstdint>

#include "scauth/common.hpp"

namespace scauth {

/// Handshake phases advance monotonically; a session that rejects or
/// completes wipes its secrets and refuses further steps.
enum class Phase : std::uint8_t {
    start,
    awaiting_response,      // card sent msg1
    awaiting_confirmation,  // server sent msg2
    awaiting_final,         // card sent msg3 (4-message protocols)
    done,
    failed,
};

/// Card-maker inputs for personalization. The RNG seed and chain key are
/// written into the card at manufacture; the counter limit selects between
/// an unlimited card (0) and a self-destructing one.
struct PersonalizeOptions {
    Bytes rng_seed;       // 32 bytes
    Bytes rng_chain_key;  // 32 bytes
    std::uint32_t counter_limit = 0;
};

namespace adversary {
class Lab;
}

/// Capability token for the reversed-confirmation protocol variants. Only the
/// attack lab can mint one, so the insecure orderings cannot run outside a
/// scripted attack scenario or demo.
class HarnessToken {
public:
    HarnessToken(const HarnessToken&) = default;

private:
    HarnessToken() = default;
    friend class adversary::Lab;
};

}  // namespace scauth

#endif  // SCAUTH_PROTOCOL_COMMON_HPP
