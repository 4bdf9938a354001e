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

#include "scauth/service.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>
#include <stdexcept>

#include "scauth/errors.hpp"
#include "scauth/pscab.hpp"
#include "scauth/pscav.hpp"
#include "scauth/rand.hpp"
#include "scauth/ssca.hpp"

namespace scauth::net {

namespace {

void set_io_timeout(int fd, int seconds) {
    timeval tv{};
    tv.tv_sec = seconds;
    ::setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof tv);
    ::setsockopt(fd, SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof tv);
}

bool write_all(int fd, ByteView data) {
    std::size_t off = 0;
    while (off < data.size()) {
        ssize_t n = ::send(fd, data.data() + off, data.size() - off, MSG_NOSIGNAL);
        if (n <= 0) return false;
        off += static_cast<std::size_t>(n);
    }
    return true;
}

bool read_exact(int fd, std::uint8_t* out, std::size_t n) {
    std::size_t off = 0;
    while (off < n) {
        ssize_t r = ::recv(fd, out + off, n - off, 0);
        if (r <= 0) return false;
        off += static_cast<std::size_t>(r);
    }
    return true;
}

enum class ReadStatus { ok, closed, malformed };

/// Reads one length-delimited frame off the socket. Anything that does not
/// parse as a well-formed frame is malformed; the caller answers with the
/// opaque reject and drops the connection.
ReadStatus read_frame(int fd, wire::Frame& out) {
    std::uint8_t header[wire::kHeaderSize];
    if (!read_exact(fd, header, sizeof header)) return ReadStatus::closed;
    if (header[0] != wire::kVersion) return ReadStatus::malformed;
    std::uint32_t len = get_be32(header + 3);
    if (len > wire::kMaxPayload) return ReadStatus::malformed;
    Bytes payload(len);
    if (len > 0 && !read_exact(fd, payload.data(), len)) return ReadStatus::malformed;
    out.version = header[0];
    out.protocol_id = header[1];
    out.msg_type = header[2];
    out.payload = std::move(payload);
    return ReadStatus::ok;
}

bool send_frame(int fd, const wire::Frame& f) {
    return write_all(fd, wire::frame_encode(f));
}

bool send_reject(int fd, std::uint8_t protocol_id) {
    return send_frame(fd, wire::reject_frame(protocol_id));
}

int connect_to(const std::string& host, std::uint16_t port, int timeout_seconds) {
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) return -1;
    set_io_timeout(fd, timeout_seconds);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
        ::close(fd);
        return -1;
    }
    if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
        ::close(fd);
        return -1;
    }
    return fd;
}

}  // namespace

AuthService::AuthService(ServerStore store, ServeOptions opts)
    : store_(std::move(store)), opts_(std::move(opts)) {}

AuthService::~AuthService() { stop(); }

void AuthService::log_line(const std::string& line) {
    if (opts_.log) opts_.log(line);
}

void AuthService::start() {
    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0) throw std::runtime_error("socket() failed");
    int one = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(opts_.port);
    if (::inet_pton(AF_INET, opts_.listen_host.c_str(), &addr.sin_addr) != 1) {
        throw std::runtime_error("bad listen address: " + opts_.listen_host);
    }
    if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
        ::close(listen_fd_);
        listen_fd_ = -1;
        throw std::runtime_error("bind failed on " + opts_.listen_host);
    }
    socklen_t len = sizeof addr;
    ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    bound_port_ = ntohs(addr.sin_port);
    if (::listen(listen_fd_, 64) != 0) {
        ::close(listen_fd_);
        listen_fd_ = -1;
        throw std::runtime_error("listen failed");
    }
    running_ = true;
    acceptor_ = std::thread([this] { accept_loop(); });
    log_line("serving on " + opts_.listen_host + ":" + std::to_string(bound_port_));
}

void AuthService::stop() {
    if (!running_.exchange(false)) {
        if (acceptor_.joinable()) acceptor_.join();
        return;
    }
    if (listen_fd_ >= 0) {
        ::shutdown(listen_fd_, SHUT_RDWR);
        ::close(listen_fd_);
        listen_fd_ = -1;
    }
    if (acceptor_.joinable()) acceptor_.join();
    reap_workers(true);
}

void AuthService::reap_workers(bool join_all) {
    std::lock_guard lock(workers_mutex_);
    std::erase_if(workers_, [join_all](const std::unique_ptr<Worker>& w) {
        if (!join_all && !w->done.load()) return false;
        if (w->thread.joinable()) w->thread.join();
        return true;
    });
}

void AuthService::accept_loop() {
    while (running_) {
        int fd = ::accept(listen_fd_, nullptr, nullptr);
        if (fd < 0) {
            if (!running_) break;
            continue;
        }
        set_io_timeout(fd, opts_.io_timeout_seconds);
        std::uint64_t session_id = next_session_.fetch_add(1);
        reap_workers(false);
        auto worker = std::make_unique<Worker>();
        Worker* w = worker.get();
        w->thread = std::thread([this, fd, session_id, w] {
            try {
                handle_connection(fd, session_id);
            } catch (const std::exception& e) {
                log_line("session " + std::to_string(session_id) +
                         " internal error: " + e.what());
                send_reject(fd, 0x01);
            }
            ::close(fd);
            w->done.store(true);
        });
        std::lock_guard lock(workers_mutex_);
        workers_.push_back(std::move(worker));
    }
}

void AuthService::handle_connection(int fd, std::uint64_t session_id) {
    const std::string sid = "session " + std::to_string(session_id);
    auto reject = [&](const char* why, std::uint8_t pid) {
        log_line(sid + " reject (" + why + ")");
        send_reject(fd, pid);
    };

    wire::Frame frame1;
    ReadStatus st = read_frame(fd, frame1);
    if (st == ReadStatus::closed) return;
    if (st == ReadStatus::malformed || !wire::known_protocol(frame1.protocol_id)) {
        reject("malformed", 0x01);
        return;
    }
    auto protocol = static_cast<wire::ProtocolId>(frame1.protocol_id);
    if (opts_.protocol_filter && *opts_.protocol_filter != protocol) {
        reject("filtered protocol", frame1.protocol_id);
        return;
    }

    std::unique_ptr<Rand> rng;
    if (opts_.rand_seed != 0) {
        rng = std::make_unique<SeededRand>(opts_.rand_seed + session_id, "service-session");
    } else {
        rng = std::make_unique<SystemRand>();
    }

    const std::string pname = wire::protocol_name(protocol);
    bool accepted = false;
    std::string check;

    switch (protocol) {
        case wire::ProtocolId::ssca: {
            auto master = store_.masters.find(0x01);
            if (master == store_.masters.end()) return reject("unconfigured protocol", frame1.protocol_id);
            ssca::ServerState server{master->second, store_.server_identity};
            auto resp = ssca::server_respond(server, *rng, frame1);
            if (!resp) return reject("handshake", frame1.protocol_id);
            if (!send_frame(fd, resp->frame2)) return;
            wire::Frame frame3;
            if (read_frame(fd, frame3) != ReadStatus::ok) return reject("malformed", frame1.protocol_id);
            auto fin = ssca::server_finish(resp->session, frame3);
            if (!fin) return reject("confirmation", frame1.protocol_id);
            if (!send_frame(fd, fin->accept_echo)) return;
            accepted = true;
            check = fin->check_value;
            break;
        }
        case wire::ProtocolId::pscab:
        case wire::ProtocolId::pscabv: {
            bool verifier = protocol == wire::ProtocolId::pscabv;
            auto master = store_.masters.find(verifier ? 0x03 : 0x02);
            if (master == store_.masters.end()) return reject("unconfigured protocol", frame1.protocol_id);
            GroupSuite suite(store_.group);
            auto beta = suite.decode_scalar(master->second);
            if (!beta) return reject("unconfigured protocol", frame1.protocol_id);
            auto params = pscab::SystemParams::create(suite, store_.server_identity);

            pscab::ServerRecord record;
            const pscab::ServerRecord* record_ptr = nullptr;
            if (verifier) {
                FieldReader rd{ByteView(frame1.payload)};
                auto identity_field = rd.next();
                if (!identity_field) return reject("handshake", frame1.protocol_id);
                const auto* stored = store_.find(frame1.protocol_id, to_string(*identity_field));
                if (!stored || stored->fields.size() != 1) return reject("handshake", frame1.protocol_id);
                auto g_c = suite.decode_element(stored->fields[0]);
                if (!g_c) return reject("handshake", frame1.protocol_id);
                record = pscab::ServerRecord{stored->identity, *g_c};
                record_ptr = &record;
            }

            auto resp = pscab::server_respond(suite, params, *beta, *rng, frame1, record_ptr);
            if (!resp) return reject("handshake", frame1.protocol_id);
            if (!send_frame(fd, resp->frame2)) return;
            wire::Frame frame3;
            if (read_frame(fd, frame3) != ReadStatus::ok) return reject("malformed", frame1.protocol_id);
            auto fin = pscab::server_finish(suite, resp->session, frame3);
            if (!fin) return reject("confirmation", frame1.protocol_id);
            if (!send_frame(fd, fin->frame4)) return;
            accepted = true;
            check = fin->check_value;
            break;
        }
        case wire::ProtocolId::pscav: {
            GroupSuite suite(store_.group);
            FieldReader rd{ByteView(frame1.payload)};
            auto identity_field = rd.next();
            if (!identity_field) return reject("handshake", frame1.protocol_id);
            const auto* stored = store_.find(frame1.protocol_id, to_string(*identity_field));
            if (!stored || stored->fields.size() != 2) return reject("handshake", frame1.protocol_id);
            auto g_c = suite.decode_element(stored->fields[0]);
            auto verifier = suite.decode_element(stored->fields[1]);
            if (!g_c || !verifier) return reject("handshake", frame1.protocol_id);
            pscav::ServerRecord record{stored->identity, *g_c, *verifier};

            auto resp = pscav::server_respond(suite, record, store_.server_identity, *rng, frame1);
            if (!resp) return reject("handshake", frame1.protocol_id);
            if (!send_frame(fd, resp->frame2)) return;
            wire::Frame frame3;
            if (read_frame(fd, frame3) != ReadStatus::ok) return reject("malformed", frame1.protocol_id);
            auto fin = pscav::server_finish(resp->session, frame3);
            if (!fin) return reject("confirmation", frame1.protocol_id);
            if (!send_frame(fd, fin->frame4)) return;
            accepted = true;
            check = fin->check_value;
            break;
        }
    }

    if (accepted) {
        log_line(sid + " accept protocol=" + pname + " check=" + check);
        // One connection, one session: any further traffic is refused.
        wire::Frame extra;
        while (read_frame(fd, extra) == ReadStatus::ok) {
            log_line(sid + " reject (interleaved session)");
            send_reject(fd, extra.protocol_id);
        }
    }
}

namespace {

AuthResult network_error(const std::string& what) {
    AuthResult r;
    r.exit_code = 4;
    r.message = what;
    return r;
}

AuthResult rejected(const std::string& what) {
    AuthResult r;
    r.exit_code = 2;
    r.accepted = false;
    r.message = what;
    return r;
}

}  // namespace

AuthResult authenticate(CardImage& image, const std::string& host, std::uint16_t port,
                        std::string_view password) {
    int fd = connect_to(host, port, 5);
    if (fd < 0) return network_error("cannot connect to " + host + ":" + std::to_string(port));
    struct Closer {
        int fd;
        ~Closer() { ::close(fd); }
    } closer{fd};

    try {
        if (auto* cred = std::get_if<ssca::CardCredential>(&image.credential)) {
            auto start = ssca::card_start(*cred, password);
            if (!send_frame(fd, start.frame1)) return network_error("send failed");
            wire::Frame frame2;
            if (read_frame(fd, frame2) != ReadStatus::ok) return network_error("read failed");
            if (frame2.msg_type == wire::kMsgReject) return rejected("server rejected");
            auto fin = ssca::card_finish(start.session, frame2);
            if (!fin) return rejected("server confirmation invalid");
            if (!send_frame(fd, fin->frame3)) return network_error("send failed");
            wire::Frame echo;
            if (read_frame(fd, echo) != ReadStatus::ok) return network_error("read failed");
            if (echo.msg_type != wire::kMsgAcceptEcho) return rejected("server rejected");
            AuthResult r;
            r.exit_code = 0;
            r.accepted = true;
            r.check_value = fin->check_value;
            r.message = "accepted";
            return r;
        }
        if (auto* cred = std::get_if<pscab::CardCredential>(&image.credential)) {
            GroupSuite suite(cred->params.group);
            auto start = pscab::card_start(suite, *cred, password);
            if (!send_frame(fd, start.frame1)) return network_error("send failed");
            wire::Frame frame2;
            if (read_frame(fd, frame2) != ReadStatus::ok) return network_error("read failed");
            if (frame2.msg_type == wire::kMsgReject) return rejected("server rejected");
            auto frame3 = pscab::card_confirm(suite, start.session, *cred, password, frame2);
            if (!frame3) return rejected("server response invalid");
            if (!send_frame(fd, *frame3)) return network_error("send failed");
            wire::Frame frame4;
            if (read_frame(fd, frame4) != ReadStatus::ok) return network_error("read failed");
            if (frame4.msg_type == wire::kMsgReject) return rejected("server rejected");
            auto fin = pscab::card_finish(start.session, frame4);
            if (!fin) return rejected("server confirmation invalid");
            AuthResult r;
            r.exit_code = 0;
            r.accepted = true;
            r.check_value = fin->check_value;
            r.message = "accepted";
            return r;
        }
        auto& cred = std::get<pscav::CardCredential>(image.credential);
        GroupSuite suite(cred.group);
        auto start = pscav::card_start(suite, cred, password);
        if (!send_frame(fd, start.frame1)) return network_error("send failed");
        wire::Frame frame2;
        if (read_frame(fd, frame2) != ReadStatus::ok) return network_error("read failed");
        if (frame2.msg_type == wire::kMsgReject) return rejected("server rejected");
        auto frame3 = pscav::card_confirm(suite, start.session, frame2);
        if (!frame3) return rejected("server response invalid");
        if (!send_frame(fd, *frame3)) return network_error("send failed");
        wire::Frame frame4;
        if (read_frame(fd, frame4) != ReadStatus::ok) return network_error("read failed");
        if (frame4.msg_type == wire::kMsgReject) return rejected("server rejected");
        auto fin = pscav::card_finish(start.session, frame4);
        if (!fin) return rejected("server confirmation invalid");
        AuthResult r;
        r.exit_code = 0;
        r.accepted = true;
        r.check_value = fin->check_value;
        r.message = "accepted";
        return r;
    } catch (const CardDestroyed&) {
        AuthResult r;
        r.exit_code = 5;
        r.message = "card destroyed";
        return r;
    }
}

AuthResult authenticate_file(const std::string& image_path, const std::string& host,
                             std::uint16_t port, std::string_view password) {
    CardImage image;
    try {
        image = card_image_load(image_path);
    } catch (const std::exception& e) {
        AuthResult r;
        r.exit_code = 4;
        r.message = e.what();
        return r;
    }
    AuthResult result = authenticate(image, host, port, password);
    // Persist the advanced card state (counters, RNG chain, destruction).
    card_image_save(image_path, image);
    return result;
}

}  // namespace scauth::net
