#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "scauth/adversary.hpp"
#include "scauth/errors.hpp"
#include "scauth/rand.hpp"

using namespace scauth;
using namespace scauth::adversary;

namespace {

PersonalizeOptions opts_from(Rand& rng, std::uint32_t limit = 0) {
    PersonalizeOptions o;
    o.rng_seed = rng.bytes(32);
    o.rng_chain_key = rng.bytes(32);
    o.counter_limit = limit;
    return o;
}

Dictionary small_dict(std::size_t true_index) {
    Dictionary d;
    d.words = {"w0", "w1", "w2", "w3", "w4", "w5", "w6", "w7"};
    d.true_index = true_index;
    return d;
}

}  // namespace

TEST_CASE("builtin dictionary fixture") {
    Dictionary d = Dictionary::builtin();
    CHECK(d.words.size() == 64);
    CHECK(d.truth_present());
    CHECK(d.true_password() == d.words[37]);
    Dictionary absent = Dictionary::builtin(Dictionary::npos);
    CHECK_FALSE(absent.truth_present());
    CHECK_THROWS_AS(absent.true_password(), std::logic_error);
}

TEST_CASE("attacker model capabilities match their definitions") {
    CHECK(AttackerModel::type1().can_query_card());
    CHECK_FALSE(AttackerModel::type1().can_read_card_memory());
    CHECK(AttackerModel::type3().can_observe_transcripts());
    CHECK(AttackerModel::type3().can_read_card_memory());
    CHECK_FALSE(AttackerModel::type3_prime().can_observe_transcripts());
    CHECK(AttackerModel::type4().can_read_card_memory());
    CHECK_FALSE(AttackerModel::type4().can_control_reader());
    CHECK_FALSE(AttackerModel::type4_prime().can_observe_transcripts());

    auto parsed = AttackerModel::from_name("type2:16");
    REQUIRE(parsed.has_value());
    CHECK(parsed->kind == ModelKind::type2);
    CHECK(parsed->query_limit == 16);
    CHECK(parsed->name() == "type2:16");
    CHECK_FALSE(AttackerModel::from_name("type9").has_value());
}

TEST_CASE("offline filter lower bound") {
    Dictionary one;
    one.words = {"only"};
    one.true_index = 0;
    auto outcome = offline_filter(one, [](std::string_view) { return true; });
    CHECK(outcome.surviving == 1);
    CHECK(outcome.dict_size == 1);
}

TEST_CASE("ssca offline views: one transcript separates the models") {
    // Build the attacker's haul by running the protocol it will attack.
    SeededRand rng(21, "setup");
    Bytes master = rng.bytes(32);
    ssca::ServerState server{master, "auth.example"};
    Dictionary dict = Dictionary::builtin(12);
    auto card = ssca::personalize(master, "alice.card.4711", "auth.example",
                                  dict.true_password(), opts_from(rng));

    SeededRand server_rng(21, "server");
    auto start = ssca::card_start(card, dict.true_password());
    auto resp = ssca::server_respond(server, server_rng, start.frame1);
    REQUIRE(resp.has_value());
    auto fin = ssca::card_finish(start.session, resp->frame2);
    REQUIRE(fin.has_value());

    SscaOfflineView view;
    view.wrapped_key = card.wrapped_key;
    view.card_identity = "alice.card.4711";
    view.server_identity = "auth.example";

    SUBCASE("memory only: the whole dictionary is consistent") {
        auto outcome = offline_filter(dict, ssca_consistency_oracle(view));
        CHECK(outcome.surviving == dict.words.size());
    }

    SUBCASE("memory plus one transcript: exactly the true password survives") {
        SscaTranscript tr;
        tr.card_identity = view.card_identity;
        tr.server_identity = view.server_identity;
        FieldReader rd1{ByteView(start.frame1.payload)};
        rd1.next();
        auto blob1 = rd1.next();
        FieldReader rd2{ByteView(resp->frame2.payload)};
        auto blob2 = rd2.next();
        auto tag_s = rd2.next(32);
        FieldReader rd3{ByteView(fin->frame3.payload)};
        auto tag_c = rd3.next(32);
        tr.blob1 = Bytes(blob1->begin(), blob1->end());
        tr.blob2 = Bytes(blob2->begin(), blob2->end());
        tr.tag_s = Bytes(tag_s->begin(), tag_s->end());
        tr.tag_c = Bytes(tag_c->begin(), tag_c->end());
        view.transcript = tr;

        auto oracle = ssca_consistency_oracle(view);
        auto outcome = offline_filter(dict, oracle);
        CHECK(outcome.surviving == 1);
        CHECK(oracle(dict.true_password()));  // the survivor is the truth
    }
}

TEST_CASE("pscab reversed-order attack recovers exactly the password") {
    SeededRand rng(22, "setup");
    GroupSuite suite(GroupConfig::standard());
    auto params = pscab::SystemParams::create(suite, "auth.example");
    Scalar beta = random_scalar(suite, rng);
    Dictionary dict = small_dict(5);
    auto card = pscab::extract(suite, params, beta, "alice.card.4711", dict.true_password(),
                               opts_from(rng));

    SUBCASE("against the reversed ordering") {
        auto outcome = attack_pscab_reversed(suite, params, beta, card.blinded_key,
                                             "alice.card.4711", false, dict, 7);
        CHECK(outcome.surviving == 1);
        CHECK(outcome.server_sessions_used == 1);
        CHECK(outcome.dict_size == 8);
    }
    SUBCASE("the survivor is the true password") {
        Dictionary absent = small_dict(Dictionary::npos);
        absent.words[5] = "not-the-password";
        auto outcome = attack_pscab_reversed(suite, params, beta, card.blinded_key,
                                             "alice.card.4711", false, absent, 7);
        CHECK(outcome.surviving == 0);
        CHECK_FALSE(outcome.truth_present);
    }
    SUBCASE("against the secure ordering the dictionary is untouched") {
        auto outcome = attack_pscab_reversed(suite, params, beta, card.blinded_key,
                                             "alice.card.4711", true, dict, 7);
        CHECK(outcome.surviving == 8);
        CHECK(outcome.server_sessions_used == 1);
    }
}

TEST_CASE("pscav reversed-order attack recovers exactly the password") {
    SeededRand rng(23, "setup");
    GroupSuite suite(GroupConfig::standard());
    Dictionary dict = small_dict(2);
    auto [card, record] = pscav::personalize(suite, rng.bytes(32), "alice.card.4711",
                                             "auth.example", dict.true_password(), opts_from(rng));

    SUBCASE("reversed ordering") {
        auto outcome = attack_pscav_reversed(suite, record, "auth.example",
                                             card.blinded_generator, false, dict, 9);
        CHECK(outcome.surviving == 1);
        CHECK(outcome.server_sessions_used == 1);
    }
    SUBCASE("truth absent reports zero survivors") {
        Dictionary absent = small_dict(Dictionary::npos);
        absent.words[2] = "not-the-password";
        auto outcome = attack_pscav_reversed(suite, record, "auth.example",
                                             card.blinded_generator, false, absent, 9);
        CHECK(outcome.surviving == 0);
        CHECK_FALSE(outcome.truth_present);
    }
    SUBCASE("secure ordering") {
        auto outcome = attack_pscav_reversed(suite, record, "auth.example",
                                             card.blinded_generator, true, dict, 9);
        CHECK(outcome.surviving == 8);
    }
}

TEST_CASE("small-subgroup confinement against the DH baseline") {
    SUBCASE("cofactor 3: at most three guesses") {
        GroupSuite suite(GroupConfig::small((1ull << 61) - 1, 3));
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            auto outcome = attack_small_subgroup(suite, seed);
            CHECK(outcome.applicable);
            CHECK(outcome.impersonation_success);
            CHECK(outcome.guesses_used <= 3);
        }
    }
    SUBCASE("prime-order group: not applicable") {
        GroupSuite suite(GroupConfig::standard());
        auto outcome = attack_small_subgroup(suite, 1);
        CHECK_FALSE(outcome.applicable);
    }
}

TEST_CASE("honest runs still complete under the reversed variant") {
    CHECK(variant_honest_run(wire::ProtocolId::pscab, 31));
    CHECK(variant_honest_run(wire::ProtocolId::pscabv, 31));
    CHECK(variant_honest_run(wire::ProtocolId::pscav, 31));
}

TEST_CASE("scenario registry") {
    auto names = scenario_names();
    CHECK(names.size() == 12);
    Dictionary dict = Dictionary::builtin(3);
    CHECK_THROWS_AS(
        run_scenario("no-such-scenario", wire::ProtocolId::ssca, AttackerModel::type1(), dict, 1),
        UnknownScenario);
}

TEST_CASE("passive and active network attackers fail across protocols") {
    Dictionary dict = Dictionary::builtin(9);
    for (auto protocol : {wire::ProtocolId::ssca, wire::ProtocolId::pscab,
                          wire::ProtocolId::pscabv, wire::ProtocolId::pscav}) {
        CAPTURE(wire::protocol_name(protocol));

        auto eav = run_scenario("eavesdrop", protocol, AttackerModel::type1(), dict, 5);
        CHECK(eav.surviving == dict.words.size());
        CHECK_FALSE(eav.impersonation_success);

        auto rep = run_scenario("replay", protocol, AttackerModel::type1(), dict, 5);
        CHECK_FALSE(rep.impersonation_success);
        CHECK(rep.server_sessions_used == 1);

        auto mitm = run_scenario("mitm", protocol, AttackerModel::type1(), dict, 5);
        CHECK_FALSE(mitm.impersonation_success);

        auto reader = run_scenario("malicious-reader", protocol, AttackerModel::type1(), dict, 5);
        CHECK_FALSE(reader.impersonation_success);
    }
}

TEST_CASE("stolen-card queries stay within the counter and learn nothing") {
    Dictionary dict = Dictionary::builtin(9);
    auto unlimited =
        run_scenario("stolen-card-query", wire::ProtocolId::ssca, AttackerModel::type1(), dict, 6);
    CHECK(unlimited.card_queries_used == 64);
    CHECK(unlimited.surviving == 64);

    auto limited = run_scenario("stolen-card-query", wire::ProtocolId::pscab,
                                AttackerModel::type2(16), dict, 6);
    CHECK(limited.card_queries_used == 16);  // never exceeds the Type II limit
    CHECK(limited.surviving == 64);
}

TEST_CASE("stolen-card read-out separates ssca from the group protocols") {
    Dictionary dict = Dictionary::builtin(9);

    auto ssca3 =
        run_scenario("stolen-card-read", wire::ProtocolId::ssca, AttackerModel::type3(), dict, 7);
    CHECK(ssca3.surviving == 1);
    CHECK(ssca3.impersonation_success);  // recovered password + memory = full clone

    auto ssca3p = run_scenario("stolen-card-read", wire::ProtocolId::ssca,
                               AttackerModel::type3_prime(), dict, 7);
    CHECK(ssca3p.surviving == 64);
    CHECK_FALSE(ssca3p.impersonation_success);

    for (auto protocol :
         {wire::ProtocolId::pscab, wire::ProtocolId::pscabv, wire::ProtocolId::pscav}) {
        CAPTURE(wire::protocol_name(protocol));
        auto out = run_scenario("stolen-card-read", protocol, AttackerModel::type3(), dict, 7);
        CHECK(out.surviving == 64);
        CHECK_FALSE(out.impersonation_success);
    }
}

TEST_CASE("memory-stick model mirrors the card read-out results") {
    Dictionary dict = Dictionary::builtin(9);
    auto ssca4 =
        run_scenario("memory-stick", wire::ProtocolId::ssca, AttackerModel::type4(), dict, 8);
    CHECK(ssca4.surviving == 1);
    auto ssca4p = run_scenario("memory-stick", wire::ProtocolId::ssca,
                               AttackerModel::type4_prime(), dict, 8);
    CHECK(ssca4p.surviving == 64);
    auto pscab4 =
        run_scenario("memory-stick", wire::ProtocolId::pscab, AttackerModel::type4(), dict, 8);
    CHECK(pscab4.surviving == 64);
    CHECK(pscab4.model == "type4");
}

TEST_CASE("counter exhaustion destroys the card after exactly the limit") {
    Dictionary dict = Dictionary::builtin(9);
    for (auto protocol : {wire::ProtocolId::ssca, wire::ProtocolId::pscav}) {
        auto out =
            run_scenario("counter-exhaustion", protocol, AttackerModel::type2(16), dict, 9);
        CHECK(out.card_queries_used == 16);
        CHECK(out.applicable);  // destruction observed
    }
}

TEST_CASE("scenarios are deterministic under a fixed seed") {
    Dictionary dict = Dictionary::builtin(9);
    for (const std::string& name : {std::string("replay"), std::string("pscab-reversed"),
                                    std::string("stolen-card-read")}) {
        auto a = run_scenario(name, wire::ProtocolId::pscab, AttackerModel::type3(), dict, 4242);
        auto b = run_scenario(name, wire::ProtocolId::pscab, AttackerModel::type3(), dict, 4242);
        CHECK(a.to_json_line() == b.to_json_line());
    }
}

TEST_CASE("json lines carry the report fields") {
    Dictionary dict = Dictionary::builtin(9);
    auto out = run_scenario("pscab-reversed", wire::ProtocolId::pscab, AttackerModel::type3(),
                            dict, 11);
    std::string line = out.to_json_line();
    CHECK(line.find("\"scenario\":\"pscab-reversed\"") != std::string::npos);
    CHECK(line.find("\"surviving\":1") != std::string::npos);
    CHECK(line.find("\"sessions\":1") != std::string::npos);
    CHECK(line.find("\"seed\":11") != std::string::npos);
}
