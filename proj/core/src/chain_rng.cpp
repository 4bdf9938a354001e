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

#include "scauth/chain_rng.hpp"

#include <algorithm>
#include <stdexcept>

#include "scauth/suite.hpp"

namespace scauth {

RngState rng_init(ByteView seed, ByteView chain_key) {
    if (seed.size() != 32 || chain_key.size() != 32) {
        throw std::invalid_argument("rng_init needs 32-byte seed and chain key");
    }
    RngState st;
    std::copy(seed.begin(), seed.end(), st.seed.begin());
    std::copy(chain_key.begin(), chain_key.end(), st.chain_key.begin());
    st.counter = 0;
    return st;
}

std::array<std::uint8_t, 32> rng_next(RngState& state) {
    Bytes msg(state.seed.begin(), state.seed.end());
    put_be64(msg, state.counter);
    Bytes out = hmac(ByteView(state.chain_key), msg);
    std::array<std::uint8_t, 32> result{};
    std::copy(out.begin(), out.end(), result.begin());
    state.seed = result;  // erase-after-use: the old seed is gone
    state.counter += 1;
    secure_wipe(out);
    secure_wipe(msg);
    return result;
}

void rng_wipe(RngState& state) {
    secure_wipe(state.seed.data(), state.seed.size());
    secure_wipe(state.chain_key.data(), state.chain_key.size());
    state.counter = 0;
}

}  // namespace scauth
