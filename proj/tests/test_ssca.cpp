#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "scauth/errors.hpp"
#include "scauth/ssca.hpp"
#include "scauth/suite.hpp"

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
    Bytes master;
    ssca::ServerState server;
    ssca::CardCredential card;
};

Setup make_setup(std::uint64_t seed, std::string_view password, std::uint32_t limit = 0) {
    SeededRand rng(seed, "ssca-test-setup");
    Bytes master = rng.bytes(32);
    ssca::ServerState server{master, "auth.example"};
    ssca::CardCredential card =
        ssca::personalize(master, "alice.card.4711", "auth.example", password, opts_from(rng, limit));
    return {master, server, card};
}

struct FullRun {
    bool accepted = false;
    Bytes card_key, server_key;
    wire::Frame frame1, frame2, frame3;
};

FullRun run_handshake(Setup& s, std::string_view password, Rand& server_rng) {
    FullRun r;
    auto start = ssca::card_start(s.card, password);
    r.frame1 = start.frame1;
    auto resp = ssca::server_respond(s.server, server_rng, start.frame1);
    if (!resp) return r;
    r.frame2 = resp->frame2;
    auto fin = ssca::card_finish(start.session, resp->frame2);
    if (!fin) return r;
    r.frame3 = fin->frame3;
    auto srv = ssca::server_finish(resp->session, fin->frame3);
    if (!srv) return r;
    r.accepted = true;
    r.card_key = fin->session_key;
    r.server_key = srv->session_key;
    return r;
}

}  // namespace

TEST_CASE("personalization wraps the derived card key") {
    Setup s = make_setup(1, "letmein");
    Bytes k = hmac(s.master, to_bytes("alice.card.4711"));  // K = H(beta, C)
    CHECK(unwrap_key("letmein", s.card.wrapped_key) == k);
    CHECK(unwrap_key("wrong-guess", s.card.wrapped_key) != k);
    CHECK(s.card.wrapped_key != k);  // never stored in clear

    SeededRand rng(2, "x");
    auto other = ssca::personalize(s.master, "bob.card.0001", "auth.example", "letmein",
                                   opts_from(rng));
    CHECK(unwrap_key("letmein", other.wrapped_key) != k);  // distinct identities, distinct keys
    CHECK_THROWS_AS(
        ssca::personalize(s.master, "", "auth.example", "pw", opts_from(rng)),
        std::invalid_argument);
}

TEST_CASE("card start always answers; the server is the only judge") {
    SeededRand server_rng(3, "server");

    Setup good = make_setup(4, "sunshine");
    auto start = ssca::card_start(good.card, "sunshine");
    CHECK(ssca::server_respond(good.server, server_rng, start.frame1).has_value());

    Setup bad = make_setup(4, "sunshine");
    auto wrong = ssca::card_start(bad.card, "m0nkey");  // card cannot tell
    CHECK_FALSE(ssca::server_respond(bad.server, server_rng, wrong.frame1).has_value());
}

TEST_CASE("counter-limited card destroys itself") {
    Setup s = make_setup(5, "dragon", 3);
    for (int i = 0; i < 3; ++i) CHECK_NOTHROW(ssca::card_start(s.card, "dragon"));
    CHECK_THROWS_AS(ssca::card_start(s.card, "dragon"), CardDestroyed);
    CHECK(s.card.destroyed);
    CHECK(s.card.wrapped_key == Bytes(32, 0));
    // and it stays dead
    CHECK_THROWS_AS(ssca::card_start(s.card, "dragon"), CardDestroyed);
}

TEST_CASE("honest three-message run accepts with one shared key") {
    Setup s = make_setup(6, "princess");
    SeededRand server_rng(6, "server");
    FullRun r = run_handshake(s, "princess", server_rng);
    CHECK(r.accepted);
    CHECK(r.card_key == r.server_key);
    CHECK(r.card_key.size() == 32);
}

TEST_CASE("garbled ciphertext is rejected") {
    Setup s = make_setup(7, "shadow");
    SeededRand server_rng(7, "server");
    auto start = ssca::card_start(s.card, "shadow");
    wire::Frame garbled = start.frame1;
    garbled.payload[garbled.payload.size() / 2] ^= 0x80;
    CHECK_FALSE(ssca::server_respond(s.server, server_rng, garbled).has_value());
}

TEST_CASE("replayed first frame meets a fresh server nonce") {
    Setup s = make_setup(8, "buster");
    SeededRand server_rng(8, "server");
    auto start = ssca::card_start(s.card, "buster");
    auto resp1 = ssca::server_respond(s.server, server_rng, start.frame1);
    auto resp2 = ssca::server_respond(s.server, server_rng, start.frame1);
    REQUIRE(resp1.has_value());
    REQUIRE(resp2.has_value());
    CHECK(resp1->session.nonce_s != resp2->session.nonce_s);
    CHECK(resp1->session.session_key != resp2->session.session_key);
}

TEST_CASE("stale or tampered server confirmation fails on the card") {
    SeededRand server_rng(9, "server");

    Setup s = make_setup(9, "harley");
    auto old_start = ssca::card_start(s.card, "harley");
    auto old_resp = ssca::server_respond(s.server, server_rng, old_start.frame1);
    REQUIRE(old_resp.has_value());

    // A new card session must not accept the earlier response.
    auto new_start = ssca::card_start(s.card, "harley");
    CHECK_FALSE(ssca::card_finish(new_start.session, old_resp->frame2).has_value());

    // Bit-flipped tag on a live session.
    auto start = ssca::card_start(s.card, "harley");
    auto resp = ssca::server_respond(s.server, server_rng, start.frame1);
    REQUIRE(resp.has_value());
    wire::Frame tampered = resp->frame2;
    tampered.payload.back() ^= 0x01;
    CHECK_FALSE(ssca::card_finish(start.session, tampered).has_value());
}

TEST_CASE("server finish verifies the card tag") {
    Setup s = make_setup(10, "ranger");
    SeededRand server_rng(10, "server");
    auto start = ssca::card_start(s.card, "ranger");
    auto resp = ssca::server_respond(s.server, server_rng, start.frame1);
    REQUIRE(resp.has_value());
    auto fin = ssca::card_finish(start.session, resp->frame2);
    REQUIRE(fin.has_value());

    SUBCASE("honest accept") {
        auto srv = ssca::server_finish(resp->session, fin->frame3);
        REQUIRE(srv.has_value());
        CHECK(srv->session_key == fin->session_key);
        CHECK(srv->check_value == fin->check_value);
        CHECK(srv->accept_echo.msg_type == wire::kMsgAcceptEcho);
    }
    SUBCASE("truncated confirmation") {
        wire::Frame truncated = fin->frame3;
        truncated.payload.pop_back();
        CHECK_FALSE(ssca::server_finish(resp->session, truncated).has_value());
    }
}

TEST_CASE("completeness and wrong-password soundness over many runs") {
    SeededRand pick(11, "passwords");
    for (int trial = 0; trial < 100; ++trial) {
        std::string password = "pw-" + std::to_string(trial);
        Setup s = make_setup(12 + static_cast<std::uint64_t>(trial), password);
        SeededRand server_rng(100 + static_cast<std::uint64_t>(trial), "server");

        FullRun good = run_handshake(s, password, server_rng);
        CHECK(good.accepted);
        CHECK(good.card_key == good.server_key);

        Setup s2 = make_setup(12 + static_cast<std::uint64_t>(trial), password);
        FullRun bad = run_handshake(s2, password + "-wrong", server_rng);
        CHECK_FALSE(bad.accepted);
    }
}

// Structural form of "no password material on the wire": with the card key
// and RNG stream held fixed, changing only the wrapping password leaves
// every emitted byte identical.
TEST_CASE("frames are a function of key and nonces only") {
    SeededRand rng(13, "material");
    Bytes master = rng.bytes(32);
    Bytes seed = rng.bytes(32);
    Bytes chain_key = rng.bytes(32);
    Bytes k = hmac(master, to_bytes("carol.card.9"));

    auto build = [&](std::string_view password) {
        ssca::CardCredential cred;
        cred.identity = "carol.card.9";
        cred.server_identity = "auth.example";
        cred.wrapped_key = wrap_key(password, k);
        cred.rng = rng_init(seed, chain_key);
        return cred;
    };
    ssca::CardCredential cred_a = build("first-password");
    ssca::CardCredential cred_b = build("second-password");

    auto frame_a = ssca::card_start(cred_a, "first-password").frame1;
    auto frame_b = ssca::card_start(cred_b, "second-password").frame1;
    CHECK(frame_a == frame_b);
}

TEST_CASE("sessions erase their material on completion") {
    Setup s = make_setup(14, "tigers");
    SeededRand server_rng(14, "server");
    auto start = ssca::card_start(s.card, "tigers");
    auto resp = ssca::server_respond(s.server, server_rng, start.frame1);
    REQUIRE(resp.has_value());
    auto fin = ssca::card_finish(start.session, resp->frame2);
    REQUIRE(fin.has_value());
    CHECK(start.session.key.empty());
    CHECK(start.session.nonce_c.empty());
    auto srv = ssca::server_finish(resp->session, fin->frame3);
    REQUIRE(srv.has_value());
    CHECK(resp->session.key.empty());
    CHECK(resp->session.session_key.empty());
}
