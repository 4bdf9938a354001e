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

#ifndef SCAUTH_PSCAB_HPP
#define SCAUTH_PSCAB_HPP

#include <optional>
#include <string>
#include <utility>

#include "scauth/chain_rng.hpp"
#include "scauth/protocol_common.hpp"
#include "scauth/rand.hpp"
#include "scauth/suite.hpp"
#include "scauth/wire.hpp"

// Identity-based password-protected authentication over a bilinear group.
// Four messages:
//
//   card   -> server : C, R_A = g_C^x
//   card   <- server : R_B = g_S^y
//   card   -> server : C_C           (card confirms FIRST)
//   card   <- server : C_S
//
// Both sides derive sk = e(g_C, g_S)^((x+s_A)(y+s_B)*beta) by different
// routes; the card's route goes through its password-blinded private key
// D = g_C^(beta*h_alpha), the server's through the master secret.
//
// The verifier flavour (pscabv) hashes the password into the per-user
// generator, g_C = H(C || alpha), and the server keeps g_C on record.
namespace scauth::pscab {

struct SystemParams {
    GroupConfig group;
    GroupElement generator;       // g, order n
    std::string server_identity;  // S
    GroupElement server_generator;  // g_S = H(S)

    static SystemParams create(const GroupSuite& suite, std::string_view server_identity);
};

struct CardCredential {
    SystemParams params;
    bool verifier_variant = false;  // pscabv: g_C depends on the entered password
    std::string identity;           // C
    GroupElement blinded_key;       // D = g_C^(beta * h_alpha); g_C itself is NOT stored
    RngState rng;
    std::uint32_t query_counter = 0;
    std::uint32_t counter_limit = 0;
    bool destroyed = false;

    wire::ProtocolId protocol() const {
        return verifier_variant ? wire::ProtocolId::pscabv : wire::ProtocolId::pscab;
    }
    void destroy();
};

/// Per-user server record, pscabv only.
struct ServerRecord {
    std::string identity;
    GroupElement user_generator;  // g_C = H(C || alpha)
};

/// PSCAb Extract: D = H(C)^(beta * h_alpha). The server keeps nothing
/// per-user; g_C is recomputable from the public identity string.
CardCredential extract(const GroupSuite& suite, const SystemParams& params, Scalar beta,
                       std::string_view card_identity, std::string_view password,
                       const PersonalizeOptions& opts);

/// PSCAbV Extract: g_C = H(C || alpha); the server stores g_C per user.
std::pair<CardCredential, ServerRecord> extract_v(const GroupSuite& suite,
                                                  const SystemParams& params, Scalar beta,
                                                  std::string_view card_identity,
                                                  std::string_view password,
                                                  const PersonalizeOptions& opts);

struct CardSession {
    std::string card_identity;
    Scalar x;                        // wiped as soon as sk is derived
    GroupElement commitment_card;    // R_A
    Bytes session_key;               // encoded target element
    Bytes expected_server_tag;       // C_S the card will accept
    std::string check_value;
    Phase phase = Phase::start;

    void erase();
};

/// The server derives sk, K_1 and both confirmation tags while responding
/// (every input is fixed once y is chosen) and wipes the scalars immediately;
/// the server tag is *released* only after the card's tag verifies.
struct ServerSession {
    wire::ProtocolId protocol = wire::ProtocolId::pscab;
    std::string card_identity;
    GroupElement commitment_card;    // R_A
    GroupElement commitment_server;  // R_B
    Bytes session_key;
    Bytes expected_card_tag;         // C_C
    Bytes server_tag;                // C_S, withheld until C_C verifies
    std::string check_value;
    bool confirmation_sent = false;
    Phase phase = Phase::start;

    void erase();
};

struct CardStart {
    CardSession session;
    wire::Frame frame1;  // C, R_A
};

CardStart card_start(const GroupSuite& suite, CardCredential& cred, std::string_view password);

struct ServerRespond {
    ServerSession session;
    wire::Frame frame2;  // R_B
};

/// `record` must be the user's stored generator for pscabv and null for
/// pscab. Rejects (nullopt) on malformed frames and on R_A outside the
/// prime-order subgroup or equal to the identity.
std::optional<ServerRespond> server_respond(const GroupSuite& suite, const SystemParams& params,
                                            Scalar beta, Rand& rng, const wire::Frame& frame1,
                                            const ServerRecord* record);

/// Card computes sk = e(D^((x+s_A)*h_alpha^-1), g_S^(s_B) * R_B) and emits
/// its confirmation tag. Rejects bad R_B (subgroup/identity policy).
std::optional<wire::Frame> card_confirm(const GroupSuite& suite, CardSession& session,
                                        const CardCredential& cred, std::string_view password,
                                        const wire::Frame& frame2);

struct ServerFinish {
    wire::Frame frame4;  // C_S, emitted only after C_C verified
    Bytes session_key;
    std::string check_value;
};

/// Verifies the card confirmation FIRST; the server tag is computed and
/// released only afterwards.
std::optional<ServerFinish> server_finish(const GroupSuite& suite, ServerSession& session,
                                          const wire::Frame& frame3);

struct CardFinish {
    Bytes session_key;
    std::string check_value;
};

std::optional<CardFinish> card_finish(CardSession& session, const wire::Frame& frame4);

struct InsecureRespond {
    ServerSession session;
    wire::Frame frame2v;  // R_B together with a premature C_S
};

/// Reversed confirmation order: the server releases C_S before seeing any
/// card confirmation. Exists solely so the attack lab can reproduce the
/// dictionary attack this ordering enables; requires a HarnessToken.
std::optional<InsecureRespond> insecure_variant_respond(const HarnessToken& harness,
                                                        const GroupSuite& suite,
                                                        const SystemParams& params, Scalar beta,
                                                        Rand& rng, const wire::Frame& frame1,
                                                        const ServerRecord* record);

struct VariantCardResult {
    wire::Frame frame3;
    Bytes session_key;
    std::string check_value;
};

/// Card-side processing of the variant responder message (R_B plus the
/// premature C_S). A secure card refuses msg-type 0x12; this entry point
/// lets the attack lab drive an honest completion under the variant.
std::optional<VariantCardResult> insecure_variant_card_process(const HarnessToken& harness,
                                                               const GroupSuite& suite,
                                                               CardSession& session,
                                                               const CardCredential& cred,
                                                               std::string_view password,
                                                               const wire::Frame& frame2v);

/// Shared tag/derivation helpers, also used by the attack lab's oracles.
Scalar pair_scalar(const GroupSuite& suite, const GroupElement& first, const GroupElement& second);
Bytes confirmation_key(const GroupSuite& suite, const TargetElement& sk);
Bytes confirmation_tag(ByteView k1, std::string_view first_id, std::string_view second_id,
                       ByteView first_commitment, ByteView second_commitment);

}  // namespace scauth::pscab

#endif  // SCAUTH_PSCAB_HPP
