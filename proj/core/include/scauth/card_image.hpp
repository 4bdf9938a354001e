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

#ifndef SCAUTH_CARD_IMAGE_HPP
#define SCAUTH_CARD_IMAGE_HPP

#include <optional>
#include <string>
#include <variant>

#include "scauth/pscab.hpp"
#include "scauth/pscav.hpp"
#include "scauth/ssca.hpp"
#include "scauth/wire.hpp"

namespace scauth {

/// Serialized credential as personalized onto a card or memory stick.
/// TLV-encoded; never contains the server's master secret.
struct CardImage {
    std::variant<ssca::CardCredential, pscab::CardCredential, pscav::CardCredential> credential;

    wire::ProtocolId protocol() const;
    bool destroyed() const;
    std::uint32_t query_counter() const;
};

Bytes card_image_encode(const CardImage& image);
std::optional<CardImage> card_image_decode(ByteView in);

void card_image_save(const std::string& path, const CardImage& image);
/// Throws std::runtime_error on missing or malformed files.
CardImage card_image_load(const std::string& path);

}  // namespace scauth

#endif  // SCAUTH_CARD_IMAGE_HPP
