#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstdio>
#include <mutex>

#include "scauth/provision.hpp"
#include "scauth/service.hpp"

using namespace scauth;

namespace {

struct LogSink {
    std::mutex mu;
    std::vector<std::string> lines;

    net::LogFn fn() {
        return [this](const std::string& line) {
            std::lock_guard lock(mu);
            lines.push_back(line);
        };
    }
    bool any_contains(const std::string& needle) {
        std::lock_guard lock(mu);
        for (const auto& l : lines) {
            if (l.find(needle) != std::string::npos) return true;
        }
        return false;
    }
};

struct Env {
    ServerStore store;
    std::map<wire::ProtocolId, CardImage> cards;
    std::string password = "harbor-lantern-42";
};

Env make_env(std::uint64_t seed) {
    Env env;
    env.store.group = GroupConfig::standard();
    env.store.server_identity = "auth.example";
    SeededRand rng(seed, "service-test");
    for (auto protocol : {wire::ProtocolId::ssca, wire::ProtocolId::pscab,
                          wire::ProtocolId::pscabv, wire::ProtocolId::pscav}) {
        env.cards.emplace(protocol, provision_card(env.store, protocol,
                                                   "card." + wire::protocol_name(protocol),
                                                   env.password, 0, rng));
    }
    return env;
}

int raw_connect(std::uint16_t port) {
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    REQUIRE(fd >= 0);
    timeval tv{2, 0};
    ::setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof tv);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    ::inet_pton(AF_INET, "127.0.0.1", &addr.sin_addr);
    REQUIRE(::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) == 0);
    return fd;
}

void raw_send(int fd, ByteView data) {
    REQUIRE(::send(fd, data.data(), data.size(), MSG_NOSIGNAL) ==
            static_cast<ssize_t>(data.size()));
}

std::optional<wire::Frame> raw_read_frame(int fd) {
    Bytes header(wire::kHeaderSize);
    std::size_t off = 0;
    while (off < header.size()) {
        ssize_t n = ::recv(fd, header.data() + off, header.size() - off, 0);
        if (n <= 0) return std::nullopt;
        off += static_cast<std::size_t>(n);
    }
    std::uint32_t len = get_be32(header.data() + 3);
    Bytes payload(len);
    off = 0;
    while (off < len) {
        ssize_t n = ::recv(fd, payload.data() + off, len - off, 0);
        if (n <= 0) return std::nullopt;
        off += static_cast<std::size_t>(n);
    }
    wire::Frame f;
    f.version = header[0];
    f.protocol_id = header[1];
    f.msg_type = header[2];
    f.payload = std::move(payload);
    return f;
}

}  // namespace

TEST_CASE("loopback authentication for every protocol") {
    Env env = make_env(1);
    LogSink sink;
    net::ServeOptions opts;
    opts.log = sink.fn();
    opts.rand_seed = 99;
    net::AuthService service(env.store, opts);
    service.start();

    for (auto& [protocol, image] : env.cards) {
        CAPTURE(wire::protocol_name(protocol));
        CardImage card = image;
        auto result = net::authenticate(card, "127.0.0.1", service.port(), env.password);
        CHECK(result.exit_code == 0);
        CHECK(result.accepted);
        CHECK(result.check_value.size() == 16);
        // the server logged the same key-check tag: both ends hold the same key
        CHECK(sink.any_contains("accept protocol=" + wire::protocol_name(protocol) +
                                " check=" + result.check_value));
    }
    service.stop();
}

TEST_CASE("wrong password is rejected and the service keeps serving") {
    Env env = make_env(2);
    LogSink sink;
    net::ServeOptions opts;
    opts.log = sink.fn();
    net::AuthService service(env.store, opts);
    service.start();

    for (auto& [protocol, image] : env.cards) {
        CAPTURE(wire::protocol_name(protocol));
        CardImage card = image;
        auto bad = net::authenticate(card, "127.0.0.1", service.port(), "wrong-guess");
        CHECK(bad.exit_code == 2);
        CHECK_FALSE(bad.accepted);
    }
    // still alive
    CardImage card = env.cards.at(wire::ProtocolId::ssca);
    auto good = net::authenticate(card, "127.0.0.1", service.port(), env.password);
    CHECK(good.exit_code == 0);
    service.stop();
}

TEST_CASE("malformed traffic gets the opaque reject and no crash") {
    Env env = make_env(3);
    net::ServeOptions opts;
    net::AuthService service(env.store, opts);
    service.start();

    SUBCASE("garbage bytes") {
        int fd = raw_connect(service.port());
        Bytes garbage = {0xde, 0xad, 0xbe, 0xef, 0x00, 0x00, 0x01, 0xff};
        raw_send(fd, garbage);
        auto reply = raw_read_frame(fd);
        if (reply) CHECK(reply->msg_type == wire::kMsgReject);
        ::close(fd);
    }
    SUBCASE("unknown protocol id") {
        int fd = raw_connect(service.port());
        wire::Frame f;
        f.protocol_id = 0x09;
        f.msg_type = 0x01;
        raw_send(fd, wire::frame_encode(f));
        auto reply = raw_read_frame(fd);
        REQUIRE(reply.has_value());
        CHECK(reply->msg_type == wire::kMsgReject);
        ::close(fd);
    }
    SUBCASE("wrong version") {
        int fd = raw_connect(service.port());
        wire::Frame f;
        f.protocol_id = 0x01;
        f.msg_type = 0x01;
        Bytes enc = wire::frame_encode(f);
        enc[0] = 0x7e;
        raw_send(fd, enc);
        auto reply = raw_read_frame(fd);
        if (reply) CHECK(reply->msg_type == wire::kMsgReject);
        ::close(fd);
    }

    // the service survived all of the above
    CardImage card = env.cards.at(wire::ProtocolId::pscab);
    auto good = net::authenticate(card, "127.0.0.1", service.port(), env.password);
    CHECK(good.exit_code == 0);
    service.stop();
}

TEST_CASE("a second session on one connection is refused") {
    Env env = make_env(4);
    net::ServeOptions opts;
    net::AuthService service(env.store, opts);
    service.start();

    // Drive a complete SSCA handshake by hand, then try to start another.
    CardImage image = env.cards.at(wire::ProtocolId::ssca);
    auto& cred = std::get<ssca::CardCredential>(image.credential);
    int fd = raw_connect(service.port());

    auto start = ssca::card_start(cred, env.password);
    raw_send(fd, wire::frame_encode(start.frame1));
    auto frame2 = raw_read_frame(fd);
    REQUIRE(frame2.has_value());
    auto fin = ssca::card_finish(start.session, *frame2);
    REQUIRE(fin.has_value());
    raw_send(fd, wire::frame_encode(fin->frame3));
    auto echo = raw_read_frame(fd);
    REQUIRE(echo.has_value());
    CHECK(echo->msg_type == wire::kMsgAcceptEcho);

    auto start2 = ssca::card_start(cred, env.password);
    raw_send(fd, wire::frame_encode(start2.frame1));
    auto reply = raw_read_frame(fd);
    REQUIRE(reply.has_value());
    CHECK(reply->msg_type == wire::kMsgReject);
    ::close(fd);
    service.stop();
}

TEST_CASE("no secret bytes reach the logs") {
    Env env = make_env(5);
    LogSink sink;
    net::ServeOptions opts;
    opts.log = sink.fn();
    net::AuthService service(env.store, opts);
    service.start();

    for (auto& [protocol, image] : env.cards) {
        CardImage card = image;
        net::authenticate(card, "127.0.0.1", service.port(), env.password);
        CardImage card2 = image;
        net::authenticate(card2, "127.0.0.1", service.port(), "not-the-password");
    }
    service.stop();

    CHECK_FALSE(sink.any_contains(env.password));
    CHECK_FALSE(sink.any_contains("not-the-password"));
    for (const auto& [pid, master] : env.store.masters) {
        CHECK_FALSE(sink.any_contains(to_hex(master)));
    }
    const auto& ssca_cred = std::get<ssca::CardCredential>(
        env.cards.at(wire::ProtocolId::ssca).credential);
    Bytes card_key = unwrap_key(env.password, ssca_cred.wrapped_key);
    CHECK_FALSE(sink.any_contains(to_hex(card_key)));
}

TEST_CASE("file-based authentication advances and persists the card") {
    Env env = make_env(6);
    net::ServeOptions opts;
    net::AuthService service(env.store, opts);
    service.start();

    std::string path = "test_auth_card.bin";
    card_image_save(path, env.cards.at(wire::ProtocolId::pscav));

    auto r1 = net::authenticate_file(path, "127.0.0.1", service.port(), env.password);
    CHECK(r1.exit_code == 0);
    CardImage after = card_image_load(path);
    CHECK(after.query_counter() == 1);

    auto r2 = net::authenticate_file(path, "127.0.0.1", service.port(), env.password);
    CHECK(r2.exit_code == 0);
    CHECK(card_image_load(path).query_counter() == 2);
    service.stop();

    // server gone: network error
    auto r3 = net::authenticate_file(path, "127.0.0.1", service.port(), env.password);
    CHECK(r3.exit_code == 4);

    std::remove(path.c_str());
}

TEST_CASE("exhausted cards report destruction through the client") {
    Env env = make_env(7);
    net::ServeOptions opts;
    net::AuthService service(env.store, opts);
    service.start();

    SeededRand rng(7, "limited");
    CardImage limited = provision_card(env.store, wire::ProtocolId::ssca, "limited.card",
                                       env.password, 2, rng);
    // restart service with the updated store (new ssca master is unchanged;
    // limited card shares it, so the running service still accepts it)
    std::string path = "test_limited_card.bin";
    card_image_save(path, limited);
    CHECK(net::authenticate_file(path, "127.0.0.1", service.port(), env.password).exit_code == 0);
    CHECK(net::authenticate_file(path, "127.0.0.1", service.port(), env.password).exit_code == 0);
    auto dead = net::authenticate_file(path, "127.0.0.1", service.port(), env.password);
    CHECK(dead.exit_code == 5);
    CHECK(card_image_load(path).destroyed());
    std::remove(path.c_str());
    service.stop();
}
