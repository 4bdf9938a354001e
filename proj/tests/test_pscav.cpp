#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "scauth/errors.hpp"
#include "scauth/pscav.hpp"

using namespace scauth;

namespace {

PersonalizeOptions opts_from(Rand& rng, std::uint32_t limit = 0) {
    PersonalizeOptions o;
    o.rng_seed = rng.bytes(32);
    o.rng_chain_key = rng.bytes(32);
    o.counter_limit = limit;
    return o;
}

struct Setup {
    GroupSuite suite;
    Bytes master;
    pscav::CardCredential card;
    pscav::ServerRecord record;
};

Setup make_setup(std::uint64_t seed, std::string_view password,
                 GroupConfig config = GroupConfig::standard()) {
    SeededRand rng(seed, "pscav-test-setup");
    GroupSuite suite(config);
    Bytes master = rng.bytes(32);
    auto [card, record] = pscav::personalize(suite, master, "alice.card.4711", "auth.example",
                                             password, opts_from(rng));
    return {std::move(suite), std::move(master), std::move(card), std::move(record)};
}

struct FullRun {
    bool accepted = false;
    Bytes card_key, server_key;
    pscav::CardSession card_session;
    pscav::ServerSession server_session;
    wire::Frame frame4;
};

FullRun run_handshake(Setup& s, std::string_view password, Rand& server_rng) {
    FullRun r;
    auto start = pscav::card_start(s.suite, s.card, password);
    auto resp = pscav::server_respond(s.suite, s.record, "auth.example", server_rng, start.frame1);
    if (!resp) return r;
    auto frame3 = pscav::card_confirm(s.suite, start.session, resp->frame2);
    if (!frame3) return r;
    auto srv = pscav::server_finish(resp->session, *frame3);
    if (!srv) {
        r.server_session = std::move(resp->session);
        return r;
    }
    r.frame4 = srv->frame4;
    auto fin = pscav::card_finish(start.session, srv->frame4);
    if (!fin) return r;
    r.accepted = true;
    r.card_key = fin->session_key;
    r.server_key = srv->session_key;
    r.card_session = std::move(start.session);
    r.server_session = std::move(resp->session);
    return r;
}

}  // namespace

TEST_CASE("personalization splits the generator into card and server parts") {
    Setup s = make_setup(1, "guitar1");
    Scalar h2 = pscav::blinding_scalar(s.suite, "guitar1");
    Scalar a = pscav::password_scalar(s.suite, "guitar1");

    CHECK(s.suite.exp(s.card.blinded_generator, s.suite.scalar_inverse(h2)) ==
          s.record.user_generator);
    CHECK(s.record.verifier == s.suite.exp(s.record.user_generator, a));
    CHECK(s.suite.is_in_subgroup(s.record.user_generator));
    CHECK(s.suite.is_in_subgroup(s.record.verifier));
    CHECK_FALSE(s.suite.is_identity(s.record.verifier));

    Setup other = make_setup(1, "guitar2");
    CHECK(other.record.user_generator != s.record.user_generator);
    CHECK(other.record.verifier != s.record.verifier);
    CHECK(other.card.blinded_generator != s.card.blinded_generator);

    // the two password scalars live in separate domains
    CHECK(h2 != a);
}

TEST_CASE("card start unblinds with the entered password") {
    Setup s = make_setup(2, "london22");
    auto start = pscav::card_start(s.suite, s.card, "london22");
    CHECK(start.session.commitment_card ==
          s.suite.exp(s.record.user_generator, start.session.x));
    CHECK(s.suite.is_in_subgroup(start.session.commitment_card));

    // Wrong password: start succeeds locally, the run dies at the server.
    Setup s2 = make_setup(2, "london22");
    SeededRand server_rng(2, "server");
    FullRun r = run_handshake(s2, "london23", server_rng);
    CHECK_FALSE(r.accepted);
    CHECK_FALSE(r.server_session.confirmation_sent);
}

TEST_CASE("honest run agrees on one group-element key") {
    Setup s = make_setup(3, "pelican9");
    SeededRand server_rng(3, "server");
    FullRun r = run_handshake(s, "pelican9", server_rng);
    CHECK(r.accepted);
    CHECK(r.card_key == r.server_key);
    CHECK(s.suite.decode_element(r.card_key).has_value());
}

// R_B^(x + u a) = (R_A V^u)^y, checked on raw exponents across many draws.
TEST_CASE("key agreement identity") {
    Setup s = make_setup(4, "startrek");
    SeededRand rng(4, "draws");
    for (int i = 0; i < 200; ++i) {
        Scalar x = random_scalar(s.suite, rng);
        Scalar y = random_scalar(s.suite, rng);
        Scalar u = random_scalar(s.suite, rng);
        Scalar a = pscav::password_scalar(s.suite, "startrek");
        GroupElement g_c = s.record.user_generator;
        GroupElement r_a = s.suite.exp(g_c, x);
        GroupElement r_b = s.suite.exp(g_c, y);

        GroupElement card_side = s.suite.exp(r_b, s.suite.scalar_add(x, s.suite.scalar_mul(u, a)));
        GroupElement server_side =
            s.suite.exp(s.suite.mul(r_a, s.suite.exp(s.record.verifier, u)), y);
        CHECK(card_side == server_side);
    }
}

TEST_CASE("server rejects unknown identities and out-of-subgroup commitments") {
    Setup s = make_setup(5, "biteme", GroupConfig::small((1ull << 61) - 1, 3));
    SeededRand server_rng(5, "server");
    auto start = pscav::card_start(s.suite, s.card, "biteme");

    SUBCASE("unknown identity") {
        wire::Frame bad;
        bad.protocol_id = static_cast<std::uint8_t>(wire::ProtocolId::pscav);
        bad.msg_type = 0x01;
        put_field(bad.payload, std::string_view("mallory.card.1"));
        put_field(bad.payload, s.suite.encode(start.session.commitment_card));
        CHECK_FALSE(
            pscav::server_respond(s.suite, s.record, "auth.example", server_rng, bad).has_value());
    }
    SUBCASE("small-order commitment") {
        wire::Frame bad;
        bad.protocol_id = static_cast<std::uint8_t>(wire::ProtocolId::pscav);
        bad.msg_type = 0x01;
        put_field(bad.payload, std::string_view("alice.card.4711"));
        put_field(bad.payload, s.suite.encode(s.suite.element_from_exponent(s.suite.config().q)));
        CHECK_FALSE(
            pscav::server_respond(s.suite, s.record, "auth.example", server_rng, bad).has_value());
    }
    SUBCASE("identity commitment") {
        wire::Frame bad;
        bad.protocol_id = static_cast<std::uint8_t>(wire::ProtocolId::pscav);
        bad.msg_type = 0x01;
        put_field(bad.payload, std::string_view("alice.card.4711"));
        put_field(bad.payload, s.suite.encode(s.suite.identity()));
        CHECK_FALSE(
            pscav::server_respond(s.suite, s.record, "auth.example", server_rng, bad).has_value());
    }
}

TEST_CASE("transcript scalar is a deterministic function of the transcript") {
    Setup s = make_setup(6, "jordan23");
    Bytes ra = s.suite.encode(s.suite.subgroup_generator());
    Bytes rb = s.suite.encode(s.suite.exp(s.suite.subgroup_generator(), {2}));
    Scalar u1 = pscav::transcript_scalar(s.suite, "c", "s", ra, rb);
    Scalar u2 = pscav::transcript_scalar(s.suite, "c", "s", ra, rb);
    CHECK(u1 == u2);
    CHECK(u1 != pscav::transcript_scalar(s.suite, "c", "s", rb, ra));
}

TEST_CASE("server withholds its tag until the card tag verifies") {
    Setup s = make_setup(7, "chelsea");
    SeededRand server_rng(7, "server");
    auto start = pscav::card_start(s.suite, s.card, "chelsea");
    auto resp = pscav::server_respond(s.suite, s.record, "auth.example", server_rng, start.frame1);
    REQUIRE(resp.has_value());

    wire::Frame forged;
    forged.protocol_id = static_cast<std::uint8_t>(wire::ProtocolId::pscav);
    forged.msg_type = 0x03;
    put_field(forged.payload, Bytes(32, 0x77));
    CHECK_FALSE(pscav::server_finish(resp->session, forged).has_value());
    CHECK_FALSE(resp->session.confirmation_sent);
    CHECK(resp->session.phase == Phase::failed);
}

TEST_CASE("secure card refuses variant frames") {
    Setup s = make_setup(8, "yankees");
    auto start = pscav::card_start(s.suite, s.card, "yankees");
    wire::Frame variant;
    variant.protocol_id = static_cast<std::uint8_t>(wire::ProtocolId::pscav);
    variant.msg_type = wire::kMsgVariantRespond;
    put_field(variant.payload, s.suite.encode(s.record.user_generator));
    put_field(variant.payload, Bytes(32, 0));
    CHECK_FALSE(pscav::card_confirm(s.suite, start.session, variant).has_value());
}

TEST_CASE("tampered server tag fails on the card") {
    Setup s = make_setup(9, "hammer");
    SeededRand server_rng(9, "server");
    auto start = pscav::card_start(s.suite, s.card, "hammer");
    auto resp = pscav::server_respond(s.suite, s.record, "auth.example", server_rng, start.frame1);
    REQUIRE(resp.has_value());
    auto frame3 = pscav::card_confirm(s.suite, start.session, resp->frame2);
    REQUIRE(frame3.has_value());
    auto srv = pscav::server_finish(resp->session, *frame3);
    REQUIRE(srv.has_value());
    wire::Frame tampered = srv->frame4;
    tampered.payload.back() ^= 1;
    CHECK_FALSE(pscav::card_finish(start.session, tampered).has_value());
}

TEST_CASE("sessions erase their material") {
    Setup s = make_setup(10, "nicole");
    SeededRand server_rng(10, "server");
    FullRun r = run_handshake(s, "nicole", server_rng);
    REQUIRE(r.accepted);
    CHECK(r.card_session.x.v == 0);
    CHECK(r.card_session.password_scalar_a.v == 0);
    CHECK(r.card_session.session_key.empty());
    CHECK(r.server_session.session_key.empty());
    CHECK(r.server_session.server_tag.empty());
}

TEST_CASE("counter-limited card destroys itself") {
    SeededRand rng(11, "setup");
    GroupSuite suite(GroupConfig::standard());
    auto [card, record] = pscav::personalize(suite, rng.bytes(32), "c", "s", "pw", opts_from(rng, 1));
    (void)record;
    CHECK_NOTHROW(pscav::card_start(suite, card, "pw"));
    CHECK_THROWS_AS(pscav::card_start(suite, card, "pw"), CardDestroyed);
    CHECK(card.destroyed);
    CHECK(suite.is_identity(card.blinded_generator));
}
