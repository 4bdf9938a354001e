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

#include "scauth/rand.hpp"

#include <sodium.h>

#include <algorithm>

namespace scauth {

Bytes Rand::bytes(std::size_t n) {
    Bytes out(n);
    fill(out);
    return out;
}

void SystemRand::fill(std::span<std::uint8_t> out) {
    randombytes_buf(out.data(), out.size());
}

SeededRand::SeededRand(std::uint64_t seed) : SeededRand(seed, "scauth/seeded-rand") {}

SeededRand::SeededRand(std::uint64_t seed, std::string_view context) {
    Bytes seed_msg;
    put_be64(seed_msg, seed);
    state_ = rng_init(sha256(seed_msg), sha256(to_bytes(context)));
}

void SeededRand::fill(std::span<std::uint8_t> out) {
    std::size_t off = 0;
    while (off < out.size()) {
        auto block = rng_next(state_);
        std::size_t n = std::min<std::size_t>(block.size(), out.size() - off);
        std::copy_n(block.begin(), n, out.begin() + off);
        off += n;
    }
}

namespace {
Scalar reduce_to_nonzero_scalar(const GroupSuite& suite, ByteView block) {
    unsigned __int128 acc = 0;
    for (int i = 0; i < 16; ++i) acc = (acc << 8) | block[static_cast<std::size_t>(i)];
    return {static_cast<std::uint64_t>(acc % suite.config().q)};
}
}  // namespace

Scalar random_scalar(const GroupSuite& suite, Rand& rng) {
    std::uint8_t block[32];
    for (;;) {
        rng.fill(block);
        Scalar k = reduce_to_nonzero_scalar(suite, ByteView(block, 32));
        if (k.v != 0) {
            secure_wipe(block, sizeof block);
            return k;
        }
    }
}

Scalar card_scalar(const GroupSuite& suite, RngState& rng) {
    for (;;) {
        auto block = rng_next(rng);
        Scalar k = reduce_to_nonzero_scalar(suite, ByteView(block));
        secure_wipe(block.data(), block.size());
        if (k.v != 0) return k;
    }
}

}  // namespace scauth
