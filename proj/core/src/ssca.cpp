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

#include "scauth/ssca.hpp"

#include <stdexcept>

#include "scauth/errors.hpp"
#include "scauth/suite.hpp"

namespace scauth::ssca {

namespace {

constexpr std::uint8_t kMsg1 = 0x01;
constexpr std::uint8_t kMsg2 = 0x02;
constexpr std::uint8_t kMsg3 = 0x03;

Bytes derive_session_key(std::string_view c, std::string_view s, ByteView r_c, ByteView r_s) {
    return role_hash(HashRole::KDF, {to_bytes(c), to_bytes(s), r_c, r_s});
}

Bytes confirmation_tag(ByteView sk, std::string_view first_id, std::string_view second_id,
                       ByteView first_nonce, ByteView second_nonce) {
    Bytes msg;
    put_field(msg, first_id);
    put_field(msg, second_id);
    put_field(msg, first_nonce);
    put_field(msg, second_nonce);
    return hmac(sk, msg);
}

wire::Frame make_frame(std::uint8_t msg_type, Bytes payload) {
    wire::Frame f;
    f.protocol_id = static_cast<std::uint8_t>(wire::ProtocolId::ssca);
    f.msg_type = msg_type;
    f.payload = std::move(payload);
    return f;
}

}  // namespace

Bytes derive_card_key(ByteView master_secret, std::string_view card_identity) {
    return hmac(master_secret, to_bytes(card_identity));
}

Bytes seal_identity_nonce(ByteView key, ByteView nonce8, std::string_view identity, ByteView nonce32) {
    Bytes plain;
    put_field(plain, identity);
    plain.insert(plain.end(), nonce32.begin(), nonce32.end());
    Bytes blob(nonce8.begin(), nonce8.end());
    Bytes ct = stream_xor(key, nonce8, plain);
    blob.insert(blob.end(), ct.begin(), ct.end());
    secure_wipe(plain);
    return blob;
}

std::optional<Bytes> open_identity_nonce(ByteView key, ByteView blob, std::string_view expect_identity) {
    if (blob.size() < 8) return std::nullopt;
    Bytes plain = stream_xor(key, blob.first(8), blob.subspan(8));
    FieldReader rd{ByteView(plain)};
    auto id = rd.next(expect_identity.size());
    if (!id || !ct_equal(*id, to_bytes(expect_identity))) return std::nullopt;
    auto rest = ByteView(plain).subspan(4 + id->size());
    if (rest.size() != 32) return std::nullopt;
    return Bytes(rest.begin(), rest.end());
}

void CardCredential::destroy() {
    secure_wipe(wrapped_key);
    wrapped_key.assign(32, 0);  // field survives zeroized so image scans can see it
    rng_wipe(rng);
    destroyed = true;
}

void Session::erase() {
    secure_wipe(key);
    secure_wipe(nonce_c);
    secure_wipe(nonce_s);
    secure_wipe(session_key);
}

CardCredential personalize(ByteView master_secret, std::string_view card_identity,
                           std::string_view server_identity, std::string_view password,
                           const PersonalizeOptions& opts) {
    if (card_identity.empty()) throw std::invalid_argument("card identity must be nonempty");
    CardCredential cred;
    cred.identity = std::string(card_identity);
    cred.server_identity = std::string(server_identity);
    Bytes key = derive_card_key(master_secret, card_identity);
    cred.wrapped_key = wrap_key(password, key);
    secure_wipe(key);
    cred.rng = rng_init(opts.rng_seed, opts.rng_chain_key);
    cred.counter_limit = opts.counter_limit;
    return cred;
}

CardStart card_start(CardCredential& cred, std::string_view password) {
    if (cred.destroyed) throw CardDestroyed{};
    if (cred.counter_limit != 0 && cred.query_counter >= cred.counter_limit) {
        cred.destroy();
        throw CardDestroyed{};
    }
    cred.query_counter += 1;

    Bytes key = unwrap_key(password, cred.wrapped_key);
    auto nonce_c_arr = rng_next(cred.rng);
    Bytes nonce_c(nonce_c_arr.begin(), nonce_c_arr.end());
    auto msg_nonce = rng_next(cred.rng);

    Bytes payload;
    put_field(payload, cred.identity);
    put_field(payload, seal_identity_nonce(key, ByteView(msg_nonce.data(), 8), cred.identity, nonce_c));

    CardStart out;
    out.session.is_card = true;
    out.session.card_identity = cred.identity;
    out.session.server_identity = cred.server_identity;
    out.session.key = std::move(key);
    out.session.nonce_c = std::move(nonce_c);
    out.session.phase = Phase::awaiting_response;
    out.frame1 = make_frame(kMsg1, std::move(payload));
    secure_wipe(nonce_c_arr.data(), nonce_c_arr.size());
    secure_wipe(msg_nonce.data(), msg_nonce.size());
    return out;
}

std::optional<ServerResponse> server_respond(const ServerState& server, Rand& rng,
                                             const wire::Frame& frame1) {
    if (frame1.msg_type != kMsg1) return std::nullopt;
    FieldReader rd{ByteView(frame1.payload)};
    auto identity_field = rd.next();
    auto blob = rd.next();
    if (!identity_field || !blob || !rd.done() || identity_field->empty()) return std::nullopt;
    std::string card_identity = to_string(*identity_field);

    Bytes key = derive_card_key(server.master_secret, card_identity);
    auto nonce_c = open_identity_nonce(key, *blob, card_identity);
    if (!nonce_c) {
        secure_wipe(key);
        return std::nullopt;  // identity mismatch after decrypt: wrong password or tamper
    }

    Bytes nonce_s = rng.bytes(32);
    Bytes sk = derive_session_key(card_identity, server.identity, *nonce_c, nonce_s);
    Bytes tag_s = confirmation_tag(sk, server.identity, card_identity, nonce_s, *nonce_c);

    Bytes msg_nonce = rng.bytes(8);
    Bytes payload;
    put_field(payload, seal_identity_nonce(key, msg_nonce, card_identity, nonce_s));
    put_field(payload, tag_s);

    ServerResponse out;
    out.session.is_card = false;
    out.session.card_identity = card_identity;
    out.session.server_identity = server.identity;
    out.session.key = std::move(key);
    out.session.nonce_c = std::move(*nonce_c);
    out.session.nonce_s = std::move(nonce_s);
    out.session.session_key = std::move(sk);
    out.session.phase = Phase::awaiting_confirmation;
    out.frame2 = make_frame(kMsg2, std::move(payload));
    return out;
}

std::optional<CardFinish> card_finish(Session& session, const wire::Frame& frame2) {
    if (!session.is_card || session.phase != Phase::awaiting_response) return std::nullopt;
    if (frame2.msg_type != kMsg2) {
        session.phase = Phase::failed;
        session.erase();
        return std::nullopt;
    }
    FieldReader rd{ByteView(frame2.payload)};
    auto blob = rd.next();
    auto tag_s = rd.next(32);
    if (!blob || !tag_s || !rd.done()) {
        session.phase = Phase::failed;
        session.erase();
        return std::nullopt;
    }
    auto nonce_s = open_identity_nonce(session.key, *blob, session.card_identity);
    if (!nonce_s) {
        session.phase = Phase::failed;
        session.erase();
        return std::nullopt;
    }
    Bytes sk = derive_session_key(session.card_identity, session.server_identity,
                                  session.nonce_c, *nonce_s);
    Bytes expect_s = confirmation_tag(sk, session.server_identity, session.card_identity,
                                      *nonce_s, session.nonce_c);
    if (!ct_equal(expect_s, *tag_s)) {
        secure_wipe(sk);
        session.phase = Phase::failed;
        session.erase();
        return std::nullopt;
    }
    Bytes tag_c = confirmation_tag(sk, session.card_identity, session.server_identity,
                                   session.nonce_c, *nonce_s);

    CardFinish out;
    out.frame3 = make_frame(kMsg3, [&] {
        Bytes p;
        put_field(p, tag_c);
        return p;
    }());
    out.check_value = session_check_value(sk);
    out.session_key = std::move(sk);
    session.phase = Phase::done;
    session.erase();
    return out;
}

std::optional<ServerFinish> server_finish(Session& session, const wire::Frame& frame3) {
    if (session.is_card || session.phase != Phase::awaiting_confirmation) return std::nullopt;
    auto fail = [&]() -> std::optional<ServerFinish> {
        session.phase = Phase::failed;
        session.erase();
        return std::nullopt;
    };
    if (frame3.msg_type != kMsg3) return fail();
    FieldReader rd{ByteView(frame3.payload)};
    auto tag_c = rd.next(32);
    if (!tag_c || !rd.done()) return fail();
    Bytes expect_c = confirmation_tag(session.session_key, session.card_identity,
                                      session.server_identity, session.nonce_c, session.nonce_s);
    if (!ct_equal(expect_c, *tag_c)) return fail();

    ServerFinish out;
    out.session_key = session.session_key;
    out.check_value = session_check_value(out.session_key);
    out.accept_echo = make_frame(wire::kMsgAcceptEcho, [&] {
        Bytes p;
        put_field(p, from_hex(out.check_value));
        return p;
    }());
    session.phase = Phase::done;
    session.erase();
    return out;
}

}  // namespace scauth::ssca
