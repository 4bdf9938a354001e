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

#include <termios.h>
#include <unistd.h>

#include <CLI11.hpp>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <semaphore>

#include "scauth/adversary.hpp"
#include "scauth/errors.hpp"
#include "scauth/provision.hpp"
#include "scauth/service.hpp"

using namespace scauth;

namespace {

constexpr int kExitAccept = 0;
constexpr int kExitReject = 2;
constexpr int kExitUsage = 3;
constexpr int kExitNetwork = 4;
constexpr int kExitDestroyed = 5;

std::string read_line_no_echo(const std::string& prompt) {
    std::cerr << prompt << std::flush;
    termios before{};
    bool is_tty = ::tcgetattr(STDIN_FILENO, &before) == 0;
    if (is_tty) {
        termios silent = before;
        silent.c_lflag &= ~static_cast<tcflag_t>(ECHO);
        ::tcsetattr(STDIN_FILENO, TCSANOW, &silent);
    }
    std::string line;
    std::getline(std::cin, line);
    if (is_tty) {
        ::tcsetattr(STDIN_FILENO, TCSANOW, &before);
        std::cerr << "\n";
    }
    return line;
}

// Passwords come from a prompt or an environment variable, never argv.
std::optional<std::string> obtain_password(const std::string& env_var, bool confirm) {
    if (!env_var.empty()) {
        const char* value = std::getenv(env_var.c_str());
        if (value == nullptr) {
            std::cerr << "environment variable " << env_var << " is not set\n";
            return std::nullopt;
        }
        return std::string(value);
    }
    std::string first = read_line_no_echo("password: ");
    if (first.empty()) {
        std::cerr << "empty password\n";
        return std::nullopt;
    }
    if (confirm) {
        std::string second = read_line_no_echo("repeat password: ");
        if (first != second) {
            std::cerr << "passwords do not match\n";
            return std::nullopt;
        }
    }
    return first;
}

std::optional<std::pair<std::string, std::uint16_t>> split_host_port(const std::string& addr) {
    auto colon = addr.rfind(':');
    if (colon == std::string::npos || colon + 1 >= addr.size()) return std::nullopt;
    int port = std::atoi(addr.c_str() + colon + 1);
    if (port <= 0 || port > 65535) return std::nullopt;
    return std::make_pair(addr.substr(0, colon), static_cast<std::uint16_t>(port));
}

int cmd_personalize(const std::string& protocol_name, const std::string& identity,
                    const std::string& db_path, const std::string& out_path,
                    const std::string& server_id, std::uint32_t limit,
                    const std::string& password_env) {
    auto protocol = wire::protocol_from_name(protocol_name);
    if (!protocol) {
        std::cerr << "unknown protocol: " << protocol_name << "\n";
        return kExitUsage;
    }
    auto password = obtain_password(password_env, true);
    if (!password) return kExitUsage;

    ServerStore store;
    if (std::filesystem::exists(db_path)) {
        store = ServerStore::load_file(db_path);
    } else {
        store.group = GroupConfig::standard();
        store.server_identity = server_id;
    }

    SystemRand rng;
    CardImage image = provision_card(store, *protocol, identity, *password, limit, rng);
    store.save_file(db_path);
    card_image_save(out_path, image);
    std::cout << "personalized " << protocol_name << " card for '" << identity << "' -> "
              << out_path << "\n";
    return kExitAccept;
}

std::binary_semaphore g_shutdown{0};

int cmd_serve(const std::string& db_path, const std::string& listen,
              const std::string& protocol_filter, std::uint64_t seed) {
    auto addr = split_host_port(listen);
    if (!addr) {
        std::cerr << "bad listen address (host:port): " << listen << "\n";
        return kExitUsage;
    }
    net::ServeOptions opts;
    opts.listen_host = addr->first;
    opts.port = addr->second;
    opts.rand_seed = seed;
    opts.log = [](const std::string& line) { std::cout << line << std::endl; };
    if (!protocol_filter.empty()) {
        auto protocol = wire::protocol_from_name(protocol_filter);
        if (!protocol) {
            std::cerr << "unknown protocol: " << protocol_filter << "\n";
            return kExitUsage;
        }
        opts.protocol_filter = protocol;
    }

    net::AuthService service(ServerStore::load_file(db_path), opts);
    try {
        service.start();
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitNetwork;
    }
    std::signal(SIGINT, [](int) { g_shutdown.release(); });
    std::signal(SIGTERM, [](int) { g_shutdown.release(); });
    g_shutdown.acquire();
    service.stop();
    return kExitAccept;
}

int cmd_auth(const std::string& image_path, const std::string& server,
             const std::string& password_env) {
    auto addr = split_host_port(server);
    if (!addr) {
        std::cerr << "bad server address (host:port): " << server << "\n";
        return kExitUsage;
    }
    auto password = obtain_password(password_env, false);
    if (!password) return kExitUsage;

    auto result = net::authenticate_file(image_path, addr->first, addr->second, *password);
    if (result.accepted) {
        std::cout << "Accept check=" << result.check_value << "\n";
    } else if (result.exit_code == kExitReject) {
        std::cout << "Reject (" << result.message << ")\n";
    } else {
        std::cout << "Error (" << result.message << ")\n";
    }
    return result.exit_code;
}

int cmd_attack(const std::string& scenario, const std::string& protocol_name,
               const std::string& dict_path, const std::string& true_word,
               const std::string& model_name, std::uint64_t seed, bool list) {
    if (list) {
        for (const auto& name : adversary::scenario_names()) std::cout << name << "\n";
        return kExitAccept;
    }
    auto protocol = wire::protocol_from_name(protocol_name);
    if (!protocol) {
        std::cerr << "unknown protocol: " << protocol_name << "\n";
        return kExitUsage;
    }
    auto model = adversary::AttackerModel::from_name(model_name);
    if (!model) {
        std::cerr << "unknown attacker model: " << model_name << "\n";
        return kExitUsage;
    }
    adversary::Dictionary dict;
    if (dict_path.empty()) {
        dict = adversary::Dictionary::builtin(seed % 64);
    } else {
        dict = adversary::Dictionary::from_file(dict_path,
                                                true_word.empty() ? "-" : true_word);
    }
    try {
        auto outcome = adversary::run_scenario(scenario, *protocol, *model, dict, seed);
        std::cout << outcome.to_json_line() << "\n";
        return kExitAccept;
    } catch (const UnknownScenario& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }
}

int cmd_demo_small_subgroup(std::uint64_t cofactor, int trials, std::uint64_t seed) {
    if (cofactor < 2 || cofactor > 64) {
        std::cerr << "cofactor must be in [2, 64]\n";
        return kExitUsage;
    }
    GroupConfig config = GroupConfig::small((1ull << 61) - 1, cofactor);
    GroupSuite suite(config);
    std::cout << "small-subgroup demo: confined key search vs validated protocols (t="
              << cofactor << ", trials=" << trials << ")\n";

    int recovered = 0;
    int worst_guesses = 0;
    for (int i = 0; i < trials; ++i) {
        auto out = adversary::attack_small_subgroup(suite, seed + static_cast<std::uint64_t>(i));
        if (out.impersonation_success) ++recovered;
        worst_guesses = std::max(worst_guesses, out.guesses_used);
    }
    std::cout << "  unprotected dh baseline: key recovered " << recovered << "/" << trials
              << " (worst case " << worst_guesses << " guesses)\n";

    adversary::Dictionary dict = adversary::Dictionary::builtin(seed % 64);
    for (auto protocol : {wire::ProtocolId::ssca, wire::ProtocolId::pscab,
                          wire::ProtocolId::pscabv, wire::ProtocolId::pscav}) {
        int rejections = 0;
        for (int i = 0; i < trials; ++i) {
            auto out = adversary::run_scenario("mitm", protocol, adversary::AttackerModel::type1(),
                                               dict, seed + static_cast<std::uint64_t>(i));
            if (!out.impersonation_success) ++rejections;
        }
        std::cout << "  " << wire::protocol_name(protocol) << ": tampered flights rejected "
                  << rejections << "/" << trials << "\n";
    }
    return kExitAccept;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"password-protected smart-card authentication toolkit"};
    app.require_subcommand(1);

    // personalize
    auto* personalize = app.add_subcommand("personalize", "create a card image and server record");
    std::string protocol = "ssca", identity, db_path, out_path, server_id = "auth.example";
    std::string password_env;
    std::uint32_t limit = 0;
    personalize->add_option("--protocol", protocol, "ssca|pscab|pscabv|pscav")->required();
    personalize->add_option("--id", identity, "card identity string")->required();
    personalize->add_option("--server-db", db_path, "server database file")->required();
    personalize->add_option("--out", out_path, "card image output path")->required();
    personalize->add_option("--server-id", server_id, "server identity (new databases only)");
    personalize->add_option("--limit", limit, "self-destruct counter (0 = unlimited)");
    personalize->add_option("--password-env", password_env,
                            "read the password from this environment variable");

    // serve
    auto* serve = app.add_subcommand("serve", "run the authentication service");
    std::string listen = "127.0.0.1:7100", serve_db, serve_filter;
    std::uint64_t serve_seed = 0;
    serve->add_option("--server-db", serve_db, "server database file")->required();
    serve->add_option("--listen", listen, "host:port");
    serve->add_option("--protocol", serve_filter, "serve only this protocol");
    serve->add_option("--seed", serve_seed, "deterministic server randomness (testing)");

    // auth
    auto* auth = app.add_subcommand("auth", "authenticate a card image against a server");
    std::string image_path, server_addr = "127.0.0.1:7100", auth_password_env;
    auth->add_option("--image", image_path, "card image path")->required();
    auth->add_option("--server", server_addr, "host:port");
    auth->add_option("--password-env", auth_password_env,
                     "read the password from this environment variable");

    // attack
    auto* attack = app.add_subcommand("attack", "run a scripted adversary scenario");
    std::string scenario, attack_protocol = "ssca", dict_path, true_word, model_name = "type3";
    std::uint64_t attack_seed = 1;
    bool list_scenarios = false;
    attack->add_option("--scenario", scenario, "scenario name (see --list)");
    attack->add_option("--protocol", attack_protocol, "ssca|pscab|pscabv|pscav");
    attack->add_option("--dict", dict_path, "newline-separated dictionary file");
    attack->add_option("--true", true_word, "the card owner's password (must be in --dict)");
    attack->add_option("--model", model_name, "type1|type2:N|type3|type3p|type4|type4p");
    attack->add_option("--seed", attack_seed, "scenario seed");
    attack->add_flag("--list", list_scenarios, "list registered scenarios");

    // demo
    auto* demo = app.add_subcommand("demo", "guided demonstrations");
    auto* small_subgroup = demo->add_subcommand("small-subgroup",
                                                "confinement attack vs subgroup validation");
    std::uint64_t cofactor = 3, demo_seed = 1;
    int demo_trials = 10;
    small_subgroup->add_option("--t", cofactor, "cofactor of the demo group");
    small_subgroup->add_option("--trials", demo_trials, "seeded trials");
    small_subgroup->add_option("--seed", demo_seed, "first trial seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? kExitAccept : kExitUsage;
    }

    try {
        if (personalize->parsed()) {
            return cmd_personalize(protocol, identity, db_path, out_path, server_id, limit,
                                   password_env);
        }
        if (serve->parsed()) return cmd_serve(serve_db, listen, serve_filter, serve_seed);
        if (auth->parsed()) return cmd_auth(image_path, server_addr, auth_password_env);
        if (attack->parsed()) {
            if (!list_scenarios && scenario.empty()) {
                std::cerr << "--scenario is required (or use --list)\n";
                return kExitUsage;
            }
            return cmd_attack(scenario, attack_protocol, dict_path, true_word, model_name,
                              attack_seed, list_scenarios);
        }
        if (demo->parsed()) {
            if (small_subgroup->parsed()) {
                return cmd_demo_small_subgroup(cofactor, demo_trials, demo_seed);
            }
            std::cerr << "pick a demo: small-subgroup\n";
            return kExitUsage;
        }
    } catch (const CardDestroyed& e) {
        std::cerr << e.what() << "\n";
        return kExitDestroyed;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitNetwork;
    }
    return kExitUsage;
}
