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

#ifndef SCAUTH_PROVISION_HPP
#define SCAUTH_PROVISION_HPP

#include "scauth/card_image.hpp"
#include "scauth/rand.hpp"
#include "scauth/server_store.hpp"

namespace scauth {

/// Card-maker workflow: personalizes one card for (protocol, identity),
/// lazily creating the protocol's master secret in the store and upserting
/// the per-identity record where the protocol keeps one. The store's group
/// config and server identity must already be set.
CardImage provision_card(ServerStore& store, wire::ProtocolId protocol,
                         std::string_view identity, std::string_view password,
                         std::uint32_t counter_limit, Rand& rng);

}  // namespace scauth

#endif  // SCAUTH_PROVISION_HPP
