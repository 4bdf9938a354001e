#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "scauth/rand.hpp"
#include "scauth/suite.hpp"

using namespace scauth;

namespace {

// Independent modular-arithmetic oracle for the tiny hand-checked groups.
std::uint64_t brute_inverse(std::uint64_t k, std::uint64_t q) {
    for (std::uint64_t j = 1; j < q; ++j) {
        if (k * j % q == 1) return j;
    }
    return 0;
}

}  // namespace

TEST_CASE("group config validation") {
    CHECK_NOTHROW(GroupConfig::standard().validate());
    CHECK_NOTHROW(GroupConfig::small(11).validate());
    CHECK_NOTHROW(GroupConfig::small(11, 3).validate());
    CHECK_THROWS_AS(GroupConfig::small(12).validate(), std::invalid_argument);   // composite
    CHECK_THROWS_AS(GroupConfig::small(11, 0).validate(), std::invalid_argument);
    GroupConfig bad = GroupConfig::standard();
    bad.suite_id = 0x91;  // high bit reserved for target encodings
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("exp in the q=11 debug group") {
    GroupSuite suite(GroupConfig::small(11));
    GroupElement g = suite.generator();
    CHECK(g.debug_exponent() == 1);

    CHECK(suite.exp(g, suite.scalar_from_u64(5)).debug_exponent() == 5);
    CHECK(suite.exp(g, suite.scalar_from_u64(0)) == suite.identity());

    GroupElement base = suite.element_from_exponent(3);
    std::uint64_t expected = 3ull * 7ull % 11ull;
    CHECK(expected == 10);
    CHECK(suite.exp(base, suite.scalar_from_u64(7)).debug_exponent() == expected);
}

TEST_CASE("mul in the q=11 debug group") {
    GroupSuite suite(GroupConfig::small(11));
    GroupElement a = suite.element_from_exponent(4);
    GroupElement b = suite.element_from_exponent(9);

    CHECK(suite.mul(suite.identity(), a) == a);
    CHECK(suite.mul(a, b).debug_exponent() == (4 + 9) % 11);

    SeededRand rng(7);
    GroupSuite big(GroupConfig::standard());
    for (int i = 0; i < 50; ++i) {
        GroupElement x = big.exp(big.subgroup_generator(), random_scalar(big, rng));
        GroupElement y = big.exp(big.subgroup_generator(), random_scalar(big, rng));
        CHECK(big.mul(x, y) == big.mul(y, x));
    }

    GroupSuite other(GroupConfig::small(11, 1, 0x0c));
    CHECK_THROWS_AS(suite.mul(a, other.identity()), std::invalid_argument);
}

TEST_CASE("scalar inverse") {
    GroupSuite suite(GroupConfig::small(11));
    CHECK(suite.scalar_inverse({1}).v == 1);
    CHECK(suite.scalar_inverse({3}).v == brute_inverse(3, 11));
    CHECK(suite.scalar_inverse({3}).v == 4);
    CHECK_THROWS_AS(suite.scalar_inverse({0}), std::domain_error);

    GroupSuite big(GroupConfig::standard());
    SeededRand rng(11);
    for (int i = 0; i < 1000; ++i) {
        Scalar k = random_scalar(big, rng);
        CHECK(big.scalar_mul(k, big.scalar_inverse(k)).v == 1);
    }
}

TEST_CASE("pairing on honest subgroup elements") {
    GroupSuite suite(GroupConfig::small(11));
    GroupElement gq = suite.subgroup_generator();
    TargetElement t = suite.pair(suite.exp(gq, {2}), suite.exp(gq, {3}));
    CHECK(t.debug_exponent() == 6);

    CHECK(suite.pair(suite.identity(), suite.exp(gq, {5})) == suite.target_identity());

    // e(x, y) with debug subgroup logs 4 and 9: target exponent 4*9 mod 11.
    CHECK(suite.pair(suite.exp(gq, {4}), suite.exp(gq, {9})).debug_exponent() == 4 * 9 % 11);
}

TEST_CASE("pairing rejects non-subgroup input") {
    GroupSuite suite(GroupConfig::small(11, 3));
    GroupElement outside = suite.element_from_exponent(4);  // 4 % 3 != 0
    CHECK_FALSE(suite.is_in_subgroup(outside));
    CHECK_THROWS_AS(suite.pair(outside, suite.subgroup_generator()), std::domain_error);
}

TEST_CASE("bilinearity") {
    GroupSuite suite(GroupConfig::standard());
    SeededRand rng(13);
    GroupElement x = suite.hash_to_group(HashRole::H2G, to_bytes("x"));
    GroupElement y = suite.hash_to_group(HashRole::H2G, to_bytes("y"));
    for (int i = 0; i < 200; ++i) {
        Scalar a = random_scalar(suite, rng);
        Scalar b = random_scalar(suite, rng);
        TargetElement lhs = suite.pair(suite.exp(x, a), suite.exp(y, b));
        TargetElement rhs = suite.target_exp(suite.pair(x, y), suite.scalar_mul(a, b));
        CHECK(lhs == rhs);
    }
    CHECK(suite.pair(suite.subgroup_generator(), suite.subgroup_generator()) !=
          suite.target_identity());  // non-degenerate
}

// The algebraic core of the four-message bilinear handshake: the card-side
// and server-side session-key formulas agree.
TEST_CASE("two-route session key identity") {
    GroupSuite suite(GroupConfig::standard());
    SeededRand rng(17);
    for (int i = 0; i < 100; ++i) {
        GroupElement g_c = suite.exp(suite.subgroup_generator(), random_scalar(suite, rng));
        GroupElement g_s = suite.exp(suite.subgroup_generator(), random_scalar(suite, rng));
        Scalar beta = random_scalar(suite, rng);
        Scalar h = random_scalar(suite, rng);
        Scalar x = random_scalar(suite, rng);
        Scalar y = random_scalar(suite, rng);
        Scalar s_a = random_scalar(suite, rng);
        Scalar s_b = random_scalar(suite, rng);

        GroupElement blinded = suite.exp(g_c, suite.scalar_mul(beta, h));  // D
        GroupElement r_a = suite.exp(g_c, x);
        GroupElement r_b = suite.exp(g_s, y);

        TargetElement card_route = suite.pair(
            suite.exp(blinded, suite.scalar_mul(suite.scalar_add(x, s_a), suite.scalar_inverse(h))),
            suite.mul(suite.exp(g_s, s_b), r_b));
        TargetElement server_route = suite.pair(
            suite.mul(suite.exp(g_c, s_a), r_a),
            suite.exp(g_s, suite.scalar_mul(suite.scalar_add(y, s_b), beta)));
        CHECK(card_route == server_route);
    }
}

TEST_CASE("hash to group") {
    GroupSuite suite(GroupConfig::standard());
    GroupElement a = suite.hash_to_group(HashRole::H2G, to_bytes("alice"));
    CHECK(a == suite.hash_to_group(HashRole::H2G, to_bytes("alice")));
    CHECK(a != suite.hash_to_group(HashRole::H2G, to_bytes("bob")));
    CHECK(suite.is_in_subgroup(a));
    CHECK_FALSE(suite.is_identity(a));
    CHECK_THROWS_AS(suite.hash_to_group(HashRole::KDF, to_bytes("x")), std::invalid_argument);

    GroupSuite cofactored(GroupConfig::small(11, 3));
    for (int i = 0; i < 32; ++i) {
        GroupElement h = cofactored.hash_to_group(HashRole::H2G, {reinterpret_cast<const std::uint8_t*>(&i), sizeof i});
        CHECK(cofactored.is_in_subgroup(h));
        CHECK_FALSE(cofactored.is_identity(h));
    }
}

TEST_CASE("hash to scalar") {
    GroupSuite suite(GroupConfig::standard());
    Scalar s = suite.hash_to_scalar(HashRole::H2S, to_bytes("secret"));
    CHECK(s == suite.hash_to_scalar(HashRole::H2S, to_bytes("secret")));

    // Nonzero by construction, exercised across many inputs on a tiny field
    // where zero residues would otherwise be common.
    GroupSuite tiny(GroupConfig::small(11));
    for (std::uint32_t i = 0; i < 10000; ++i) {
        Bytes msg;
        put_be32(msg, i);
        CHECK(tiny.hash_to_scalar(HashRole::PI, msg).v != 0);
    }

    // pi is ordered: swapping the inputs changes the output.
    SeededRand rng(23);
    int collisions = 0;
    for (int i = 0; i < 100; ++i) {
        Bytes r_a = rng.bytes(9);
        Bytes r_b = rng.bytes(9);
        Bytes ab, ba;
        put_field(ab, r_a);
        put_field(ab, r_b);
        put_field(ba, r_b);
        put_field(ba, r_a);
        if (suite.hash_to_scalar(HashRole::PI, ab) == suite.hash_to_scalar(HashRole::PI, ba)) {
            ++collisions;
        }
    }
    CHECK(collisions == 0);

    // Same input, different role: unrelated outputs.
    CHECK(suite.hash_to_scalar(HashRole::H2S, to_bytes("m")) !=
          suite.hash_to_scalar(HashRole::PI, to_bytes("m")));
}

TEST_CASE("subgroup membership") {
    GroupSuite suite(GroupConfig::small(11, 3));
    CHECK(suite.is_in_subgroup(suite.identity()));
    CHECK(suite.is_in_subgroup(suite.element_from_exponent(3)));
    CHECK_FALSE(suite.is_in_subgroup(suite.element_from_exponent(4)));
    CHECK(suite.is_in_subgroup(suite.hash_to_group(HashRole::H2G, to_bytes("anyone"))));
}

TEST_CASE("hmac against published vectors") {
    // RFC 4231 test cases 1 and 2.
    Bytes key1(20, 0x0b);
    Bytes tag1 = hmac(key1, to_bytes("Hi There"));
    CHECK(to_hex(tag1) == "b0344c61d8db38535ca8afceaf0bf12b881dc200c9833da726e9376c2e32cff7");

    Bytes tag2 = hmac(to_bytes("Jefe"), to_bytes("what do ya want for nothing?"));
    CHECK(to_hex(tag2) == "5bdcc146bf60754e6a042426089575c75a003f089d2739839dec58b964ec3843");

    CHECK(tag1.size() == 32);
    CHECK(hmac(key1, to_bytes("Hi There")) == tag1);

    Bytes flipped = to_bytes("Hi There");
    flipped[0] ^= 0x01;
    CHECK(hmac(key1, flipped) != tag1);
}

TEST_CASE("sha256 sanity") {
    CHECK(to_hex(sha256(to_bytes("abc"))) ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("password key wrap") {
    SeededRand rng(31);
    Bytes plain = rng.bytes(32);

    Bytes wrapped = wrap_key("hunter2", plain);
    CHECK(wrapped.size() == plain.size());
    CHECK(unwrap_key("hunter2", wrapped) == plain);
    CHECK(wrap_key("hunter2", plain) == wrapped);  // deterministic

    Bytes wrong = unwrap_key("hunter3", wrapped);
    CHECK(wrong.size() == 32);
    CHECK(wrong != plain);

    // unwrap is total: every candidate yields some 32-byte key.
    for (int i = 0; i < 1000; ++i) {
        std::string candidate = "candidate-" + std::to_string(i);
        CHECK(unwrap_key(candidate, wrapped).size() == 32);
    }
}

TEST_CASE("encodings round-trip") {
    GroupSuite suite(GroupConfig::standard());
    SeededRand rng(37);
    CHECK(suite.scalar_width() == 8);
    for (int i = 0; i < 200; ++i) {
        Scalar k = random_scalar(suite, rng);
        GroupElement x = suite.exp(suite.subgroup_generator(), k);
        TargetElement t = suite.pair(x, x);

        CHECK(suite.decode_element(suite.encode(x)) == x);
        CHECK(suite.decode_target(suite.encode(t)) == t);
        CHECK(suite.decode_scalar(suite.encode_scalar(k)) == k);
    }

    GroupSuite tiny(GroupConfig::small(11));
    CHECK(tiny.scalar_width() == 1);  // ceil(bits(11)/8)
    CHECK(tiny.encode(tiny.generator()).size() == 2);

    // Rejected encodings: wrong suite byte, wrong width, out-of-range value.
    Bytes enc = suite.encode(suite.generator());
    enc[0] ^= 0x40;
    CHECK_FALSE(suite.decode_element(enc).has_value());
    CHECK_FALSE(suite.decode_element(Bytes{0x11}).has_value());
    Bytes big(9, 0xff);
    big[0] = 0x11;
    CHECK_FALSE(suite.decode_element(big).has_value());

    // Target and element encodings are distinct on the type byte.
    GroupElement g = suite.subgroup_generator();
    CHECK_FALSE(suite.decode_target(suite.encode(g)).has_value());
}

TEST_CASE("role tags are distinct") {
    std::set<std::string> tags;
    for (HashRole role : {HashRole::H2G, HashRole::H2S, HashRole::PI, HashRole::KDF,
                          HashRole::SK, HashRole::WRAP}) {
        ByteView t = role_tag(role);
        tags.insert(std::string(t.begin(), t.end()));
    }
    CHECK(tags.size() == 6);
}

TEST_CASE("session check value is short and stable") {
    Bytes sk(32, 0xab);
    std::string check = session_check_value(sk);
    CHECK(check.size() == 16);
    CHECK(check == session_check_value(sk));
    sk[0] ^= 1;
    CHECK(check != session_check_value(sk));
}
