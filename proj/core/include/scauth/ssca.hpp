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

#ifndef SCAUTH_SSCA_HPP
#define SCAUTH_SSCA_HPP

#include <optional>
#include <string>

#include "scauth/chain_rng.hpp"
#include "scauth/protocol_common.hpp"
#include "scauth/rand.hpp"
#include "scauth/wire.hpp"

// Symmetric-key smart-card authentication. Three messages:
//
//   card   -> server : C, E_K'(C || R_c)
//   card   <- server : E_K(C || R_s), C_s
//   card   -> server : C_c
//
// K = HMAC(beta, C) is the card key; the card holds only the password-wrapped
// form and never learns whether the entered password was right. The server's
// identity check after decryption is the only wrong-password signal, and it
// is online-only.
namespace scauth::ssca {

struct CardCredential {
    std::string identity;         // C
    std::string server_identity;  // S
    Bytes wrapped_key;            // 32 bytes: wrap_key(alpha, K); K never stored in clear
    RngState rng;
    std::uint32_t query_counter = 0;
    std::uint32_t counter_limit = 0;  // 0 = unlimited (Type I card)
    bool destroyed = false;

    /// Zeroize all secret fields; the card is unusable afterwards.
    void destroy();
};

struct ServerState {
    Bytes master_secret;      // beta, 32 bytes; never leaves this struct
    std::string identity;     // S
};

struct Session {
    bool is_card = false;
    std::string card_identity;
    std::string server_identity;
    Bytes key;       // K (server) or K' (card, from the entered password)
    Bytes nonce_c;   // R_c
    Bytes nonce_s;   // R_s
    Bytes session_key;
    Phase phase = Phase::start;

    void erase();
};

CardCredential personalize(ByteView master_secret, std::string_view card_identity,
                           std::string_view server_identity, std::string_view password,
                           const PersonalizeOptions& opts);

struct CardStart {
    Session session;
    wire::Frame frame1;
};

/// Always succeeds regardless of password correctness (a wrong password
/// produces a frame the server will refuse). Throws CardDestroyed once a
/// counter-limited card is exhausted.
CardStart card_start(CardCredential& cred, std::string_view password);

struct ServerResponse {
    Session session;
    wire::Frame frame2;
};

/// nullopt on any validity failure; the caller answers with the opaque
/// reject frame so the cause never reaches the wire.
std::optional<ServerResponse> server_respond(const ServerState& server, Rand& rng,
                                             const wire::Frame& frame1);

struct CardFinish {
    wire::Frame frame3;
    Bytes session_key;
    std::string check_value;
};

/// Verifies the server confirmation tag; on success hands out the session
/// key and wipes the session. nullopt = confirmation failed.
std::optional<CardFinish> card_finish(Session& session, const wire::Frame& frame2);

struct ServerFinish {
    Bytes session_key;
    std::string check_value;
    wire::Frame accept_echo;
};

std::optional<ServerFinish> server_finish(Session& session, const wire::Frame& frame3);

/// The card key as the server derives it. Exposed for personalization and
/// the attack lab's recomputation oracles.
Bytes derive_card_key(ByteView master_secret, std::string_view card_identity);

/// Unauthenticated inner encryption E_K: 8-byte nonce || ChaCha20 stream XOR
/// of lp(identity) || nonce32. Open returns the 32-byte nonce only when the
/// recovered identity matches `expect_identity` and the layout parses.
Bytes seal_identity_nonce(ByteView key, ByteView nonce8, std::string_view identity, ByteView nonce32);
std::optional<Bytes> open_identity_nonce(ByteView key, ByteView blob, std::string_view expect_identity);

}  // namespace scauth::ssca

#endif  // SCAUTH_SSCA_HPP
