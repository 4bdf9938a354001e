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

#ifndef SCAUTH_CHAIN_RNG_HPP
#define SCAUTH_CHAIN_RNG_HPP

#include <array>
#include <cstdint>

#include "scauth/common.hpp"

namespace scauth {

/// Deterministic hash-chain RNG as a smart card would run it: a stored seed
/// cell is hashed under a card-local key to produce each output, and the
/// output overwrites the seed. A draw counter is folded into the hash input
/// so accidental state reuse yields distinct streams.
struct RngState {
    std::array<std::uint8_t, 32> seed{};       // the "EPROM" cell, overwritten on every draw
    std::array<std::uint8_t, 32> chain_key{};  // card-local secret key
    std::uint64_t counter = 0;

    bool operator==(const RngState&) const = default;
};

/// Both inputs must be 32 bytes. Counter starts at 0.
RngState rng_init(ByteView seed, ByteView chain_key);

/// output = HMAC(chain_key, seed || be64(counter)); the output becomes the
/// new seed and the counter increments. Prior outputs are unrecoverable from
/// the advanced state without inverting the keyed hash.
std::array<std::uint8_t, 32> rng_next(RngState& state);

/// Zeroize the state in place.
void rng_wipe(RngState& state);

}  // namespace scauth

#endif  // SCAUTH_CHAIN_RNG_HPP
