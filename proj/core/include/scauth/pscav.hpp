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

#ifndef SCAUTH_PSCAV_HPP
#define SCAUTH_PSCAV_HPP

#include <optional>
#include <string>
#include <utility>

#include "scauth/chain_rng.hpp"
#include "scauth/protocol_common.hpp"
#include "scauth/rand.hpp"
#include "scauth/suite.hpp"
#include "scauth/wire.hpp"

// Password-verifier protocol: the server stores per-user validation data
// (g_C and V = g_C^a), the card a password-blinded generator W = g_C^h2.
//
//   card   -> server : C, R_A = g_C^x
//   card   <- server : R_B = g_C^y
//   card   -> server : C_c           (card confirms FIRST)
//   card   <- server : C_s
//
// sk = g_C^(y(x + u*a)), reached as R_B^(x + u*a) on the card and
// (R_A * V^u)^y on the server, with u hashed from the transcript.
namespace scauth::pscav {

struct ServerRecord {
    std::string identity;         // C
    GroupElement user_generator;  // g_C = H1(C, alpha, beta), unpredictable without beta
    GroupElement verifier;        // V = g_C^a
};

struct CardCredential {
    GroupConfig group;
    std::string identity;           // C
    std::string server_identity;    // S
    GroupElement blinded_generator; // W = g_C^h2
    RngState rng;
    std::uint32_t query_counter = 0;
    std::uint32_t counter_limit = 0;
    bool destroyed = false;

    void destroy();
};

/// Personalization derives g_C from (C, alpha) under the master secret and
/// splits it into the card part W and the server verifier pair.
std::pair<CardCredential, ServerRecord> personalize(const GroupSuite& suite,
                                                    ByteView master_secret,
                                                    std::string_view card_identity,
                                                    std::string_view server_identity,
                                                    std::string_view password,
                                                    const PersonalizeOptions& opts);

struct CardSession {
    std::string card_identity;
    std::string server_identity;
    Scalar x;
    Scalar password_scalar_a;        // a' from the entered password, wiped after use
    GroupElement commitment_card;    // R_A
    Bytes session_key;               // encoded group element
    Bytes expected_server_tag;
    std::string check_value;
    Phase phase = Phase::start;

    void erase();
};

struct ServerSession {
    std::string card_identity;
    GroupElement commitment_card;
    GroupElement commitment_server;
    Bytes session_key;
    Bytes expected_card_tag;
    Bytes server_tag;                // withheld until C_c verifies
    std::string check_value;
    bool confirmation_sent = false;
    Phase phase = Phase::start;

    void erase();
};

struct CardStart {
    CardSession session;
    wire::Frame frame1;
};

/// The card unblinds its generator with the ENTERED password; with a wrong
/// password every local step still succeeds and the run fails only at the
/// server, never on the card.
CardStart card_start(const GroupSuite& suite, CardCredential& cred, std::string_view password);

struct ServerRespond {
    ServerSession session;
    wire::Frame frame2;
};

std::optional<ServerRespond> server_respond(const GroupSuite& suite, const ServerRecord& record,
                                            std::string_view server_identity, Rand& rng,
                                            const wire::Frame& frame1);

std::optional<wire::Frame> card_confirm(const GroupSuite& suite, CardSession& session,
                                        const wire::Frame& frame2);

struct ServerFinish {
    wire::Frame frame4;
    Bytes session_key;
    std::string check_value;
};

std::optional<ServerFinish> server_finish(ServerSession& session, const wire::Frame& frame3);

struct CardFinish {
    Bytes session_key;
    std::string check_value;
};

std::optional<CardFinish> card_finish(CardSession& session, const wire::Frame& frame4);

struct InsecureRespond {
    ServerSession session;
    wire::Frame frame2v;  // R_B plus the premature C_s
};

/// Reversed confirmation order, attack-lab only.
std::optional<InsecureRespond> insecure_variant_respond(const HarnessToken& harness,
                                                        const GroupSuite& suite,
                                                        const ServerRecord& record,
                                                        std::string_view server_identity,
                                                        Rand& rng, const wire::Frame& frame1);

struct VariantCardResult {
    wire::Frame frame3;
    Bytes session_key;
    std::string check_value;
};

std::optional<VariantCardResult> insecure_variant_card_process(const HarnessToken& harness,
                                                               const GroupSuite& suite,
                                                               CardSession& session,
                                                               const wire::Frame& frame2v);

/// Derivation helpers shared with the attack lab.
Scalar password_scalar(const GroupSuite& suite, std::string_view password);   // a
Scalar blinding_scalar(const GroupSuite& suite, std::string_view password);   // h2
Scalar transcript_scalar(const GroupSuite& suite, std::string_view card_identity,
                         std::string_view server_identity, ByteView enc_ra, ByteView enc_rb);  // u
Bytes confirmation_tag(const GroupSuite& suite, ByteView enc_sk, std::string_view first_id,
                       std::string_view second_id, ByteView first_commitment,
                       ByteView second_commitment);

}  // namespace scauth::pscav

#endif  // SCAUTH_PSCAV_HPP
