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

#include "scauth/provision.hpp"

#include <stdexcept>

namespace scauth {

namespace {

Bytes& ensure_master(ServerStore& store, std::uint8_t protocol_id, Rand& rng,
                     const GroupSuite* suite) {
    auto it = store.masters.find(protocol_id);
    if (it != store.masters.end()) return it->second;
    Bytes secret;
    if (suite != nullptr) {
        secret = suite->encode_scalar(random_scalar(*suite, rng));
    } else {
        secret = rng.bytes(32);
    }
    return store.masters.emplace(protocol_id, std::move(secret)).first->second;
}

}  // namespace

CardImage provision_card(ServerStore& store, wire::ProtocolId protocol,
                         std::string_view identity, std::string_view password,
                         std::uint32_t counter_limit, Rand& rng) {
    store.group.validate();
    if (store.server_identity.empty()) {
        throw std::invalid_argument("server store has no server identity");
    }
    PersonalizeOptions opts;
    opts.rng_seed = rng.bytes(32);
    opts.rng_chain_key = rng.bytes(32);
    opts.counter_limit = counter_limit;

    const std::uint8_t pid = static_cast<std::uint8_t>(protocol);
    switch (protocol) {
        case wire::ProtocolId::ssca: {
            Bytes& master = ensure_master(store, pid, rng, nullptr);
            auto cred = ssca::personalize(master, identity, store.server_identity, password, opts);
            return CardImage{std::move(cred)};
        }
        case wire::ProtocolId::pscab: {
            GroupSuite suite(store.group);
            Bytes& master = ensure_master(store, pid, rng, &suite);
            Scalar beta = *suite.decode_scalar(master);
            auto params = pscab::SystemParams::create(suite, store.server_identity);
            auto cred = pscab::extract(suite, params, beta, identity, password, opts);
            return CardImage{std::move(cred)};
        }
        case wire::ProtocolId::pscabv: {
            GroupSuite suite(store.group);
            Bytes& master = ensure_master(store, pid, rng, &suite);
            Scalar beta = *suite.decode_scalar(master);
            auto params = pscab::SystemParams::create(suite, store.server_identity);
            auto [cred, record] = pscab::extract_v(suite, params, beta, identity, password, opts);
            store.upsert({pid, record.identity, {suite.encode(record.user_generator)}});
            return CardImage{std::move(cred)};
        }
        case wire::ProtocolId::pscav: {
            GroupSuite suite(store.group);
            Bytes& master = ensure_master(store, pid, rng, nullptr);
            auto [cred, record] = pscav::personalize(suite, master, identity,
                                                     store.server_identity, password, opts);
            store.upsert({pid, record.identity,
                          {suite.encode(record.user_generator), suite.encode(record.verifier)}});
            return CardImage{std::move(cred)};
        }
    }
    throw std::invalid_argument("unknown protocol");
}

}  // namespace scauth
