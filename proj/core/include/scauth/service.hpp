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

#ifndef SCAUTH_SERVICE_HPP
#define SCAUTH_SERVICE_HPP

#include <atomic>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "scauth/card_image.hpp"
#include "scauth/server_store.hpp"
#include "scauth/wire.hpp"

namespace scauth::net {

using LogFn = std::function<void(const std::string& line)>;

struct ServeOptions {
    std::string listen_host = "127.0.0.1";
    std::uint16_t port = 0;  // 0 = pick an ephemeral port
    std::optional<wire::ProtocolId> protocol_filter;
    LogFn log;               // Accept/Reject lines; never secrets
    std::uint64_t rand_seed = 0;  // 0 = operating-system randomness
    int io_timeout_seconds = 5;
};

/// TCP authentication service: one handshake per connection, connections
/// handled concurrently, per-connection failures isolated. Every refusal is
/// the single opaque reject frame.
class AuthService {
public:
    AuthService(ServerStore store, ServeOptions opts);
    ~AuthService();

    AuthService(const AuthService&) = delete;
    AuthService& operator=(const AuthService&) = delete;

    /// Binds and starts accepting; throws std::runtime_error on bind failure.
    void start();
    void stop();
    std::uint16_t port() const { return bound_port_; }

private:
    struct Worker {
        std::thread thread;
        std::atomic<bool> done{false};
    };

    void accept_loop();
    void reap_workers(bool join_all);
    void handle_connection(int fd, std::uint64_t session_id);
    void log_line(const std::string& line);

    ServerStore store_;
    ServeOptions opts_;
    int listen_fd_ = -1;
    std::uint16_t bound_port_ = 0;
    std::atomic<bool> running_{false};
    std::atomic<std::uint64_t> next_session_{1};
    std::thread acceptor_;
    std::mutex workers_mutex_;
    std::vector<std::unique_ptr<Worker>> workers_;
};

struct AuthResult {
    int exit_code = 4;  // 0 accept, 2 reject, 4 network error, 5 card destroyed
    bool accepted = false;
    std::string check_value;  // 16 hex chars, from the freshly agreed key
    std::string message;
};

/// Runs the protocol the image was personalized for against host:port. The
/// image advances (RNG state, query counter) even on failed runs.
AuthResult authenticate(CardImage& image, const std::string& host, std::uint16_t port,
                        std::string_view password);

/// File-based wrapper: loads the image, authenticates, and persists the
/// advanced image state back to disk (including self-destruction).
AuthResult authenticate_file(const std::string& image_path, const std::string& host,
                             std::uint16_t port, std::string_view password);

}  // namespace scauth::net

#endif  // SCAUTH_SERVICE_HPP
