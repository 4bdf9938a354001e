#include <benchmark/benchmark.h>

#include "scauth/adversary.hpp"
#include "scauth/provision.hpp"

using namespace scauth;

namespace {

const GroupSuite& suite() {
    static GroupSuite s{GroupConfig::standard()};
    return s;
}

void BM_GroupExp(benchmark::State& state) {
    SeededRand rng(1);
    GroupElement base = suite().subgroup_generator();
    Scalar k = random_scalar(suite(), rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(suite().exp(base, k));
    }
}
BENCHMARK(BM_GroupExp);

void BM_Pair(benchmark::State& state) {
    SeededRand rng(2);
    GroupElement a = suite().exp(suite().subgroup_generator(), random_scalar(suite(), rng));
    GroupElement b = suite().exp(suite().subgroup_generator(), random_scalar(suite(), rng));
    for (auto _ : state) {
        benchmark::DoNotOptimize(suite().pair(a, b));
    }
}
BENCHMARK(BM_Pair);

void BM_HashToGroup(benchmark::State& state) {
    Bytes msg = to_bytes("alice.card.4711");
    for (auto _ : state) {
        benchmark::DoNotOptimize(suite().hash_to_group(HashRole::H2G, msg));
    }
}
BENCHMARK(BM_HashToGroup);

void BM_WrapUnwrap(benchmark::State& state) {
    Bytes plain(32, 0x42);
    for (auto _ : state) {
        benchmark::DoNotOptimize(unwrap_key("hunter2", wrap_key("hunter2", plain)));
    }
}
BENCHMARK(BM_WrapUnwrap);

struct Deployment {
    ServerStore store;
    CardImage image;
};

Deployment deploy(wire::ProtocolId protocol) {
    Deployment d;
    d.store.group = GroupConfig::standard();
    d.store.server_identity = "auth.example";
    SeededRand rng(3);
    d.image = provision_card(d.store, protocol, "bench.card", "bench-password", 0, rng);
    return d;
}

void run_handshake(Deployment& d, wire::ProtocolId protocol, Rand& server_rng) {
    GroupSuite s(d.store.group);
    switch (protocol) {
        case wire::ProtocolId::ssca: {
            auto& cred = std::get<ssca::CardCredential>(d.image.credential);
            ssca::ServerState server{d.store.masters.at(0x01), d.store.server_identity};
            auto start = ssca::card_start(cred, "bench-password");
            auto resp = ssca::server_respond(server, server_rng, start.frame1);
            auto fin = ssca::card_finish(start.session, resp->frame2);
            benchmark::DoNotOptimize(ssca::server_finish(resp->session, fin->frame3));
            return;
        }
        case wire::ProtocolId::pscab: {
            auto& cred = std::get<pscab::CardCredential>(d.image.credential);
            Scalar beta = *s.decode_scalar(d.store.masters.at(0x02));
            auto params = pscab::SystemParams::create(s, d.store.server_identity);
            auto start = pscab::card_start(s, cred, "bench-password");
            auto resp = pscab::server_respond(s, params, beta, server_rng, start.frame1, nullptr);
            auto frame3 = pscab::card_confirm(s, start.session, cred, "bench-password",
                                              resp->frame2);
            auto srv = pscab::server_finish(s, resp->session, *frame3);
            benchmark::DoNotOptimize(pscab::card_finish(start.session, srv->frame4));
            return;
        }
        case wire::ProtocolId::pscav: {
            auto& cred = std::get<pscav::CardCredential>(d.image.credential);
            const auto* stored = d.store.find(0x04, cred.identity);
            pscav::ServerRecord record{stored->identity, *s.decode_element(stored->fields[0]),
                                       *s.decode_element(stored->fields[1])};
            auto start = pscav::card_start(s, cred, "bench-password");
            auto resp = pscav::server_respond(s, record, d.store.server_identity, server_rng,
                                              start.frame1);
            auto frame3 = pscav::card_confirm(s, start.session, resp->frame2);
            auto srv = pscav::server_finish(resp->session, *frame3);
            benchmark::DoNotOptimize(pscav::card_finish(start.session, srv->frame4));
            return;
        }
        default:
            return;
    }
}

void BM_SscaHandshake(benchmark::State& state) {
    Deployment d = deploy(wire::ProtocolId::ssca);
    SeededRand server_rng(4);
    for (auto _ : state) run_handshake(d, wire::ProtocolId::ssca, server_rng);
}
BENCHMARK(BM_SscaHandshake);

void BM_PscabHandshake(benchmark::State& state) {
    Deployment d = deploy(wire::ProtocolId::pscab);
    SeededRand server_rng(5);
    for (auto _ : state) run_handshake(d, wire::ProtocolId::pscab, server_rng);
}
BENCHMARK(BM_PscabHandshake);

void BM_PscavHandshake(benchmark::State& state) {
    Deployment d = deploy(wire::ProtocolId::pscav);
    SeededRand server_rng(6);
    for (auto _ : state) run_handshake(d, wire::ProtocolId::pscav, server_rng);
}
BENCHMARK(BM_PscavHandshake);

void BM_OfflineFilter64(benchmark::State& state) {
    auto dict = adversary::Dictionary::builtin(17);
    for (auto _ : state) {
        auto outcome = adversary::run_scenario("pscab-reversed", wire::ProtocolId::pscab,
                                               adversary::AttackerModel::type3(), dict, 7);
        benchmark::DoNotOptimize(outcome);
    }
}
BENCHMARK(BM_OfflineFilter64);

}  // namespace

BENCHMARK_MAIN();
