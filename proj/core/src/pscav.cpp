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

#include "scauth/pscav.hpp"

#include <stdexcept>

#include "scauth/errors.hpp"

namespace scauth::pscav {

namespace {

constexpr std::uint8_t kMsg1 = 0x01;
constexpr std::uint8_t kMsg2 = 0x02;
constexpr std::uint8_t kMsg3 = 0x03;
constexpr std::uint8_t kMsg4 = 0x04;

wire::Frame make_frame(std::uint8_t msg_type, Bytes payload) {
    wire::Frame f;
    f.protocol_id = static_cast<std::uint8_t>(wire::ProtocolId::pscav);
    f.msg_type = msg_type;
    f.payload = std::move(payload);
    return f;
}

std::optional<GroupElement> accept_element(const GroupSuite& suite, ByteView encoded) {
    auto x = suite.decode_element(encoded);
    if (!x || !suite.is_in_subgroup(*x) || suite.is_identity(*x)) return std::nullopt;
    return x;
}

struct ServerKeys {
    ServerSession session;
    Bytes frame2_payload;
};

std::optional<ServerKeys> derive_server_side(const GroupSuite& suite, const ServerRecord& record,
                                             std::string_view server_identity, Rand& rng,
                                             const wire::Frame& frame1) {
    FieldReader rd{ByteView(frame1.payload)};
    auto identity_field = rd.next();
    auto ra_field = rd.next();
    if (!identity_field || !ra_field || !rd.done() || identity_field->empty()) return std::nullopt;
    if (to_string(*identity_field) != record.identity) return std::nullopt;  // unknown identity

    auto commitment_card = accept_element(suite, *ra_field);
    if (!commitment_card) return std::nullopt;

    Scalar y = random_scalar(suite, rng);
    GroupElement commitment_server = suite.exp(record.user_generator, y);

    Bytes enc_ra = suite.encode(*commitment_card);
    Bytes enc_rb = suite.encode(commitment_server);
    Scalar u = transcript_scalar(suite, record.identity, server_identity, enc_ra, enc_rb);

    // sk = (R_A * V^u)^y
    GroupElement sk = suite.exp(suite.mul(*commitment_card, suite.exp(record.verifier, u)), y);
    y.v = 0;
    Bytes enc_sk = suite.encode(sk);

    ServerKeys out;
    out.session.card_identity = record.identity;
    out.session.commitment_card = *commitment_card;
    out.session.commitment_server = commitment_server;
    out.session.session_key = enc_sk;
    out.session.expected_card_tag =
        confirmation_tag(suite, enc_sk, record.identity, server_identity, enc_ra, enc_rb);
    out.session.server_tag =
        confirmation_tag(suite, enc_sk, server_identity, record.identity, enc_rb, enc_ra);
    out.session.check_value = session_check_value(enc_sk);
    out.session.phase = Phase::awaiting_confirmation;

    put_field(out.frame2_payload, enc_rb);
    return out;
}

}  // namespace

Scalar password_scalar(const GroupSuite& suite, std::string_view password) {
    Bytes msg;
    msg.push_back('A');
    put_field(msg, password);
    return suite.hash_to_scalar(HashRole::H2S, msg);
}

Scalar blinding_scalar(const GroupSuite& suite, std::string_view password) {
    Bytes msg;
    msg.push_back('B');
    put_field(msg, password);
    return suite.hash_to_scalar(HashRole::H2S, msg);
}

Scalar transcript_scalar(const GroupSuite& suite, std::string_view card_identity,
                         std::string_view server_identity, ByteView enc_ra, ByteView enc_rb) {
    Bytes msg;
    put_field(msg, card_identity);
    put_field(msg, server_identity);
    put_field(msg, enc_ra);
    put_field(msg, enc_rb);
    return suite.hash_to_scalar(HashRole::PI, msg);
}

Bytes confirmation_tag(const GroupSuite& suite, ByteView enc_sk, std::string_view first_id,
                       std::string_view second_id, ByteView first_commitment,
                       ByteView second_commitment) {
    (void)suite;
    return role_hash(HashRole::SK, {enc_sk, to_bytes(first_id), to_bytes(second_id),
                                    first_commitment, second_commitment});
}

void CardCredential::destroy() {
    blinded_generator = GroupSuite(group).identity();  // exponent zeroized
    rng_wipe(rng);
    destroyed = true;
}

void CardSession::erase() {
    x.v = 0;
    password_scalar_a.v = 0;
    secure_wipe(session_key);
    secure_wipe(expected_server_tag);
}

void ServerSession::erase() {
    secure_wipe(session_key);
    secure_wipe(expected_card_tag);
    secure_wipe(server_tag);
}

std::pair<CardCredential, ServerRecord> personalize(const GroupSuite& suite,
                                                    ByteView master_secret,
                                                    std::string_view card_identity,
                                                    std::string_view server_identity,
                                                    std::string_view password,
                                                    const PersonalizeOptions& opts) {
    if (card_identity.empty()) throw std::invalid_argument("card identity must be nonempty");

    // H1: keyed by the master secret so g_C is unpredictable without it.
    Bytes keyed_input;
    put_field(keyed_input, card_identity);
    put_field(keyed_input, password);
    Bytes keyed = hmac(master_secret, keyed_input);
    GroupElement g_c = suite.hash_to_group(HashRole::H2G, keyed);
    secure_wipe(keyed);
    secure_wipe(keyed_input);

    CardCredential cred;
    cred.group = suite.config();
    cred.identity = std::string(card_identity);
    cred.server_identity = std::string(server_identity);
    cred.blinded_generator = suite.exp(g_c, blinding_scalar(suite, password));
    cred.rng = rng_init(opts.rng_seed, opts.rng_chain_key);
    cred.counter_limit = opts.counter_limit;

    ServerRecord record;
    record.identity = std::string(card_identity);
    record.user_generator = g_c;
    record.verifier = suite.exp(g_c, password_scalar(suite, password));
    return {std::move(cred), std::move(record)};
}

CardStart card_start(const GroupSuite& suite, CardCredential& cred, std::string_view password) {
    if (cred.destroyed) throw CardDestroyed{};
    if (cred.counter_limit != 0 && cred.query_counter >= cred.counter_limit) {
        cred.destroy();
        throw CardDestroyed{};
    }
    cred.query_counter += 1;

    // Unblind with the entered password; a wrong password silently yields a
    // different generator and the handshake dies at the server.
    Scalar h2 = blinding_scalar(suite, password);
    GroupElement g_c = suite.exp(cred.blinded_generator, suite.scalar_inverse(h2));

    CardStart out;
    out.session.card_identity = cred.identity;
    out.session.server_identity = cred.server_identity;
    out.session.x = card_scalar(suite, cred.rng);
    out.session.password_scalar_a = password_scalar(suite, password);
    out.session.commitment_card = suite.exp(g_c, out.session.x);
    out.session.phase = Phase::awaiting_response;

    Bytes payload;
    put_field(payload, cred.identity);
    put_field(payload, suite.encode(out.session.commitment_card));
    out.frame1 = make_frame(kMsg1, std::move(payload));
    return out;
}

std::optional<ServerRespond> server_respond(const GroupSuite& suite, const ServerRecord& record,
                                            std::string_view server_identity, Rand& rng,
                                            const wire::Frame& frame1) {
    if (frame1.msg_type != kMsg1) return std::nullopt;
    auto keys = derive_server_side(suite, record, server_identity, rng, frame1);
    if (!keys) return std::nullopt;
    ServerRespond out;
    out.session = std::move(keys->session);
    out.frame2 = make_frame(kMsg2, std::move(keys->frame2_payload));
    return out;
}

std::optional<wire::Frame> card_confirm(const GroupSuite& suite, CardSession& session,
                                        const wire::Frame& frame2) {
    if (session.phase != Phase::awaiting_response) return std::nullopt;
    auto fail = [&]() -> std::optional<wire::Frame> {
        session.phase = Phase::failed;
        session.erase();
        return std::nullopt;
    };
    if (frame2.msg_type != kMsg2) return fail();
    FieldReader rd{ByteView(frame2.payload)};
    auto rb_field = rd.next();
    if (!rb_field || !rd.done()) return fail();
    auto commitment_server = accept_element(suite, *rb_field);
    if (!commitment_server) return fail();

    Bytes enc_ra = suite.encode(session.commitment_card);
    Bytes enc_rb = suite.encode(*commitment_server);
    Scalar u = transcript_scalar(suite, session.card_identity, session.server_identity,
                                 enc_ra, enc_rb);

    // sk = R_B^(x + u*a')
    Scalar exponent = suite.scalar_add(session.x, suite.scalar_mul(u, session.password_scalar_a));
    GroupElement sk = suite.exp(*commitment_server, exponent);
    session.x.v = 0;
    session.password_scalar_a.v = 0;
    exponent.v = 0;

    Bytes enc_sk = suite.encode(sk);
    Bytes tag_card = confirmation_tag(suite, enc_sk, session.card_identity,
                                      session.server_identity, enc_ra, enc_rb);
    session.expected_server_tag = confirmation_tag(suite, enc_sk, session.server_identity,
                                                   session.card_identity, enc_rb, enc_ra);
    session.session_key = std::move(enc_sk);
    session.check_value = session_check_value(session.session_key);
    session.phase = Phase::awaiting_final;

    Bytes payload;
    put_field(payload, tag_card);
    return make_frame(kMsg3, std::move(payload));
}

std::optional<ServerFinish> server_finish(ServerSession& session, const wire::Frame& frame3) {
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
    out.frame4 = make_frame(kMsg4, std::move(payload));
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
                                                        const ServerRecord& record,
                                                        std::string_view server_identity,
                                                        Rand& rng, const wire::Frame& frame1) {
    if (frame1.msg_type != kMsg1) return std::nullopt;
    auto keys = derive_server_side(suite, record, server_identity, rng, frame1);
    if (!keys) return std::nullopt;
    InsecureRespond out;
    out.session = std::move(keys->session);
    out.session.confirmation_sent = true;
    Bytes payload = std::move(keys->frame2_payload);
    put_field(payload, out.session.server_tag);
    out.frame2v = make_frame(wire::kMsgVariantRespond, std::move(payload));
    return out;
}

std::optional<VariantCardResult> insecure_variant_card_process(const HarnessToken&,
                                                               const GroupSuite& suite,
                                                               CardSession& session,
                                                               const wire::Frame& frame2v) {
    if (session.phase != Phase::awaiting_response) return std::nullopt;
    if (frame2v.msg_type != wire::kMsgVariantRespond) return std::nullopt;
    FieldReader rd{ByteView(frame2v.payload)};
    auto rb_field = rd.next();
    auto server_tag = rd.next(32);
    if (!rb_field || !server_tag || !rd.done()) return std::nullopt;

    wire::Frame plain_frame2 = make_frame(kMsg2, [&] {
        Bytes p;
        put_field(p, *rb_field);
        return p;
    }());
    auto frame3 = card_confirm(suite, session, plain_frame2);
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

}  // namespace scauth::pscav
