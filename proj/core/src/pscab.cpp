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

#include "scauth/pscab.hpp"

#include <stdexcept>

#include "scauth/errors.hpp"

namespace scauth::pscab {

namespace {

constexpr std::uint8_t kMsg1 = 0x01;
constexpr std::uint8_t kMsg2 = 0x02;
constexpr std::uint8_t kMsg3 = 0x03;
constexpr std::uint8_t kMsg4 = 0x04;

wire::Frame make_frame(wire::ProtocolId protocol, std::uint8_t msg_type, Bytes payload) {
    wire::Frame f;
    f.protocol_id = static_cast<std::uint8_t>(protocol);
    f.msg_type = msg_type;
    f.payload = std::move(payload);
    return f;
}

GroupElement user_generator(const GroupSuite& suite, std::string_view card_identity,
                            const std::string* password_for_v) {
    if (password_for_v == nullptr) {
        return suite.hash_to_group(HashRole::H2G, to_bytes(card_identity));
    }
    Bytes msg;
    put_field(msg, card_identity);
    put_field(msg, *password_for_v);
    return suite.hash_to_group(HashRole::H2G, msg);
}

Scalar password_scalar(const GroupSuite& suite, std::string_view password) {
    return suite.hash_to_scalar(HashRole::H2S, to_bytes(password));
}

/// Incoming elements must be valid encodings, inside the prime-order
/// subgroup, and not the identity (a confined or annihilated element).
std::optional<GroupElement> accept_element(const GroupSuite& suite, ByteView encoded) {
    auto x = suite.decode_element(encoded);
    if (!x || !suite.is_in_subgroup(*x) || suite.is_identity(*x)) return std::nullopt;
    return x;
}

struct ServerKeys {
    ServerSession session;
    Bytes frame2_payload;
};

/// Everything the responder derives once y is drawn: R_B, sk by the server
/// formula e(g_C^(s_A) * R_A, g_S^((y+s_B)*beta)), K_1 and both tags.
std::optional<ServerKeys> derive_server_side(const GroupSuite& suite, const SystemParams& params,
                                             Scalar beta, Rand& rng, const wire::Frame& frame1,
                                             const ServerRecord* record) {
    FieldReader rd{ByteView(frame1.payload)};
    auto identity_field = rd.next();
    auto ra_field = rd.next();
    if (!identity_field || !ra_field || !rd.done() || identity_field->empty()) return std::nullopt;
    std::string card_identity = to_string(*identity_field);

    auto commitment_card = accept_element(suite, *ra_field);
    if (!commitment_card) return std::nullopt;

    GroupElement g_c;
    if (record != nullptr) {
        if (record->identity != card_identity) return std::nullopt;
        g_c = record->user_generator;
    } else {
        g_c = user_generator(suite, card_identity, nullptr);
    }

    Scalar y = random_scalar(suite, rng);
    GroupElement commitment_server = suite.exp(params.server_generator, y);

    Bytes enc_ra = suite.encode(*commitment_card);
    Bytes enc_rb = suite.encode(commitment_server);
    Scalar s_a = pair_scalar(suite, *commitment_card, commitment_server);
    Scalar s_b = pair_scalar(suite, commitment_server, *commitment_card);

    TargetElement sk = suite.pair(suite.mul(suite.exp(g_c, s_a), *commitment_card),
                                  suite.exp(params.server_generator,
                                            suite.scalar_mul(suite.scalar_add(y, s_b), beta)));
    y.v = 0;

    Bytes k1 = confirmation_key(suite, sk);
    ServerKeys out;
    out.session.protocol = record ? wire::ProtocolId::pscabv : wire::ProtocolId::pscab;
    out.session.card_identity = card_identity;
    out.session.commitment_card = *commitment_card;
    out.session.commitment_server = commitment_server;
    out.session.session_key = suite.encode(sk);
    out.session.expected_card_tag =
        confirmation_tag(k1, card_identity, params.server_identity, enc_ra, enc_rb);
    out.session.server_tag =
        confirmation_tag(k1, params.server_identity, card_identity, enc_rb, enc_ra);
    out.session.check_value = session_check_value(out.session.session_key);
    out.session.phase = Phase::awaiting_confirmation;
    secure_wipe(k1);

    put_field(out.frame2_payload, enc_rb);
    return out;
}

}  // namespace

SystemParams SystemParams::create(const GroupSuite& suite, std::string_view server_identity) {
    SystemParams p;
    p.group = suite.config();
    p.generator = suite.generator();
    p.server_identity = std::string(server_identity);
    p.server_generator = suite.hash_to_group(HashRole::H2G, to_bytes(server_identity));
    return p;
}

Scalar pair_scalar(const GroupSuite& suite, const GroupElement& first, const GroupElement& second) {
    Bytes msg;
    put_field(msg, suite.encode(first));
    put_field(msg, suite.encode(second));
    return suite.hash_to_scalar(HashRole::PI, msg);
}

Bytes confirmation_key(const GroupSuite& suite, const TargetElement& sk) {
    static const std::uint8_t one = 0x01;
    return role_hash(HashRole::KDF, {suite.encode(sk), ByteView(&one, 1)});
}

Bytes confirmation_tag(ByteView k1, std::string_view first_id, std::string_view second_id,
                       ByteView first_commitment, ByteView second_commitment) {
    Bytes msg;
    put_field(msg, first_id);
    put_field(msg, second_id);
    put_field(msg, first_commitment);
    put_field(msg, second_commitment);
    return hmac(k1, msg);
}

void CardCredential::destroy() {
    blinded_key = GroupSuite(params.group).identity();  // exponent zeroized
    rng_wipe(rng);
    destroyed = true;
}

void CardSession::erase() {
    x.v = 0;
    secure_wipe(session_key);
    secure_wipe(expected_server_tag);
}

void ServerSession::erase() {
    secure_wipe(session_key);
    secure_wipe(expected_card_tag);
    secure_wipe(server_tag);
}

CardCredential extract(const GroupSuite& suite, const SystemParams& params, Scalar beta,
                       std::string_view card_identity, std::string_view password,
                       const PersonalizeOptions& opts) {
    if (card_identity.empty()) throw std::invalid_argument("card identity must be nonempty");
    CardCredential cred;
    cred.params = params;
    cred.identity = std::string(card_identity);
    GroupElement g_c = user_generator(suite, card_identity, nullptr);
    Scalar h = password_scalar(suite, password);
    cred.blinded_key = suite.exp(g_c, suite.scalar_mul(beta, h));
    cred.rng = rng_init(opts.rng_seed, opts.rng_chain_key);
    cred.counter_limit = opts.counter_limit;
    return cred;
}

std::pair<CardCredential, ServerRecord> extract_v(const GroupSuite& suite,
                                                  const SystemParams& params, Scalar beta,
                                                  std::string_view card_identity,
                                                  std::string_view password,
                                                  const PersonalizeOptions& opts) {
    if (card_identity.empty()) throw std::invalid_argument("card identity must be nonempty");
    std::string pw(password);
    GroupElement g_c = user_generator(suite, card_identity, &pw);
    secure_wipe(pw);

    CardCredential cred;
    cred.params = params;
    cred.verifier_variant = true;
    cred.identity = std::string(card_identity);
    Scalar h = password_scalar(suite, password);
    cred.blinded_key = suite.exp(g_c, suite.scalar_mul(beta, h));
    cred.rng = rng_init(opts.rng_seed, opts.rng_chain_key);
    cred.counter_limit = opts.counter_limit;

    ServerRecord record{std::string(card_identity), g_c};
    return {std::move(cred), std::move(record)};
}

CardStart card_start(const GroupSuite& suite, CardCredential& cred, std::string_view password) {
    if (cred.destroyed) throw CardDestroyed{};
    if (cred.counter_limit != 0 && cred.query_counter >= cred.counter_limit) {
        cred.destroy();
        throw CardDestroyed{};
    }
    cred.query_counter += 1;

    GroupElement g_c;
    if (cred.verifier_variant) {
        std::string pw(password);
        g_c = user_generator(suite, cred.identity, &pw);
        secure_wipe(pw);
    } else {
        g_c = user_generator(suite, cred.identity, nullptr);
    }

    CardStart out;
    out.session.card_identity = cred.identity;
    out.session.x = card_scalar(suite, cred.rng);
    out.session.commitment_card = suite.exp(g_c, out.session.x);
    out.session.phase = Phase::awaiting_response;

    Bytes payload;
    put_field(payload, cred.identity);
    put_field(payload, suite.encode(out.session.commitment_card));
    out.frame1 = make_frame(cred.protocol(), kMsg1, std::move(payload));
    return out;
}

std::optional<ServerRespond> server_respond(const GroupSuite& suite, const SystemParams& params,
                                            Scalar beta, Rand& rng, const wire::Frame& frame1,
                                            const ServerRecord* record) {
    if (frame1.msg_type != kMsg1) return std::nullopt;
    auto keys = derive_server_side(suite, params, beta, rng, frame1, record);
    if (!keys) return std::nullopt;
    ServerRespond out;
    out.session = std::move(keys->session);
    out.frame2 = make_frame(record ? wire::ProtocolId::pscabv : wire::ProtocolId::pscab, kMsg2,
                            std::move(keys->frame2_payload));
    return out;
}

std::optional<wire::Frame> card_confirm(const GroupSuite& suite, CardSession& session,
                                        const CardCredential& cred, std::string_view password,
                                        const wire::Frame& frame2) {
    if (session.phase != Phase::awaiting_response) return std::nullopt;
    auto fail = [&]() -> std::optional<wire::Frame> {
        session.phase = Phase::failed;
        session.erase();
        return std::nullopt;
    };
    if (frame2.msg_type != kMsg2) return fail();  // variant frames (0x12) refused here
    FieldReader rd{ByteView(frame2.payload)};
    auto rb_field = rd.next();
    if (!rb_field || !rd.done()) return fail();
    auto commitment_server = accept_element(suite, *rb_field);
    if (!commitment_server) return fail();

    Bytes enc_ra = suite.encode(session.commitment_card);
    Bytes enc_rb = suite.encode(*commitment_server);
    Scalar s_a = pair_scalar(suite, session.commitment_card, *commitment_server);
    Scalar s_b = pair_scalar(suite, *commitment_server, session.commitment_card);

    Scalar h = password_scalar(suite, password);
    Scalar exponent = suite.scalar_mul(suite.scalar_add(session.x, s_a), suite.scalar_inverse(h));
    TargetElement sk =
        suite.pair(suite.exp(cred.blinded_key, exponent),
                   suite.mul(suite.exp(cred.params.server_generator, s_b), *commitment_server));
    session.x.v = 0;

    Bytes k1 = confirmation_key(suite, sk);
    Bytes tag_card = confirmation_tag(k1, session.card_identity, cred.params.server_identity,
                                      enc_ra, enc_rb);
    session.expected_server_tag = confirmation_tag(k1, cred.params.server_identity,
                                                   session.card_identity, enc_rb, enc_ra);
    session.session_key = suite.encode(sk);
    session.check_value = session_check_value(session.session_key);
    session.phase = Phase::awaiting_final;
    secure_wipe(k1);

    Bytes payload;
    put_field(payload, tag_card);
    return make_frame(cred.protocol(), kMsg3, std::move(payload));
}

std::optional<ServerFinish> server_finish(const GroupSuite& suite, ServerSession& session,
                                          const wire::Frame& frame3) {
    (void)suite;
    if (session.phase != Phase::awaiting_confirmation) return std::nullopt;
    auto fail = [&]() -> std::optional<ServerFinish> {
        session.phase = Phase::failed;
        session.erase();
        return std::nullopt;
    };
    if (frame3.msg_type != kMsg3) return fail();
    FieldReader rd{ByteView(frame3.payload)};
    auto tag = rd.next(32);
    if (!tag || !rd.done()) return fail();
    if (!ct_equal(*tag, session.expected_card_tag)) return fail();

    ServerFinish out;
    Bytes payload;
    put_field(payload, session.server_tag);
    out.frame4 = make_frame(session.protocol, kMsg4, std::move(payload));
    out.session_key = session.session_key;
    out.check_value = session.check_value;
    session.confirmation_sent = true;
    session.phase = Phase::done;
    session.erase();
    return out;
}

std::optional<CardFinish> card_finish(CardSession& session, const wire::Frame& frame4) {
    if (session.phase != Phase::awaiting_final) return std::nullopt;
    auto fail = [&]() -> std::optional<CardFinish> {
        session.phase = Phase::failed;
        session.erase();
        return std::nullopt;
    };
    if (frame4.msg_type != kMsg4) return fail();
    FieldReader rd{ByteView(frame4.payload)};
    auto tag = rd.next(32);
    if (!tag || !rd.done()) return fail();
    if (!ct_equal(*tag, session.expected_server_tag)) return fail();

    CardFinish out;
    out.session_key = session.session_key;
    out.check_value = session.check_value;
    session.phase = Phase::done;
    session.erase();
    return out;
}

std::optional<InsecureRespond> insecure_variant_respond(const HarnessToken&, const GroupSuite& suite,
                                                        const SystemParams& params, Scalar beta,
                                                        Rand& rng, const wire::Frame& frame1,
                                                        const ServerRecord* record) {
    if (frame1.msg_type != kMsg1) return std::nullopt;
    auto keys = derive_server_side(suite, params, beta, rng, frame1, record);
    if (!keys) return std::nullopt;
    InsecureRespond out;
    out.session = std::move(keys->session);
    out.session.confirmation_sent = true;  // the whole point of the insecure ordering
    Bytes payload = std::move(keys->frame2_payload);
    put_field(payload, out.session.server_tag);
    out.frame2v = make_frame(record ? wire::ProtocolId::pscabv : wire::ProtocolId::pscab,
                             wire::kMsgVariantRespond, std::move(payload));
    return out;
}

std::optional<VariantCardResult> insecure_variant_card_process(const HarnessToken&,
                                                               const GroupSuite& suite,
                                                               CardSession& session,
                                                               const CardCredential& cred,
                                                               std::string_view password,
                                                               const wire::Frame& frame2v) {
    if (session.phase != Phase::awaiting_response) return std::nullopt;
    if (frame2v.msg_type != wire::kMsgVariantRespond) return std::nullopt;
    FieldReader rd{ByteView(frame2v.payload)};
    auto rb_field = rd.next();
    auto server_tag = rd.next(32);
    if (!rb_field || !server_tag || !rd.done()) return std::nullopt;

    wire::Frame plain_frame2 = make_frame(cred.protocol(), kMsg2, [&] {
        Bytes p;
        put_field(p, *rb_field);
        return p;
    }());
    auto frame3 = card_confirm(suite, session, cred, password, plain_frame2);
    if (!frame3) return std::nullopt;
    if (!ct_equal(*server_tag, session.expected_server_tag)) {
        session.phase = Phase::failed;
        session.erase();
        return std::nullopt;
    }
    VariantCardResult out;
    out.frame3 = *frame3;
    out.session_key = session.session_key;
    out.check_value = session.check_value;
    session.phase = Phase::done;
    session.erase();
    return out;
}

}  // namespace scauth::pscab
