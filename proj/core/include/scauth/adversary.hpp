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

#ifndef SCAUTH_ADVERSARY_HPP
#define SCAUTH_ADVERSARY_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "scauth/pscab.hpp"
#include "scauth/pscav.hpp"
#include "scauth/ssca.hpp"
#include "scauth/suite.hpp"
#include "scauth/wire.hpp"

// Scripted attacker scenarios. Attackers here are honest-to-their-model
// simulations: they get exactly the view their model grants (card memory,
// transcripts, card queries, server sessions) and run the strongest offline
// test that view supports. "Consistent" means exact recomputation of the
// observed tags and ciphertext structure under a candidate password.
namespace scauth::adversary {

struct Dictionary {
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    std::vector<std::string> words;
    std::size_t true_index = npos;  // npos = true password deliberately absent

    bool truth_present() const { return true_index != npos && true_index < words.size(); }
    const std::string& true_password() const;

    /// Bundled 64-word fixture of common passwords.
    static Dictionary builtin(std::size_t true_index = 37);
    /// Newline-separated word list. true_password may be absent from the file.
    static Dictionary from_file(const std::string& path, std::string_view true_password);
};

enum class ModelKind {
    type1,        // tamper-resistant card, unlimited queries
    type2,        // tamper-resistant card, self-destruct counter
    type3,        // card memory readable; transcripts observed
    type3_prime,  // card memory readable; no transcripts ever observed
    type4,        // memory stick read-out; transcripts observed
    type4_prime,  // memory stick read-out; no transcripts
};

struct AttackerModel {
    ModelKind kind = ModelKind::type1;
    std::uint32_t query_limit = 0;  // type2 only

    bool can_query_card() const;
    bool can_read_card_memory() const;
    bool can_observe_transcripts() const;
    bool can_control_reader() const;
    bool can_contact_server() const;

    std::string name() const;
    /// "type1", "type2:16", "type3", "type3p", "type4", "type4p".
    static std::optional<AttackerModel> from_name(std::string_view name);

    static AttackerModel type1() { return {ModelKind::type1, 0}; }
    static AttackerModel type2(std::uint32_t limit) { return {ModelKind::type2, limit}; }
    static AttackerModel type3() { return {ModelKind::type3, 0}; }
    static AttackerModel type3_prime() { return {ModelKind::type3_prime, 0}; }
    static AttackerModel type4() { return {ModelKind::type4, 0}; }
    static AttackerModel type4_prime() { return {ModelKind::type4_prime, 0}; }
};

struct AttackOutcome {
    std::string scenario;
    std::string protocol;
    std::string model;
    std::size_t dict_size = 0;
    std::size_t surviving = 0;       // candidates consistent with the attacker view
    bool truth_present = true;
    bool impersonation_success = false;
    int server_sessions_used = 0;
    int card_queries_used = 0;
    std::uint64_t seed = 0;
    bool applicable = true;          // small-subgroup attack vs t = 1 reports false
    int guesses_used = 0;            // small-subgroup key search

    std::string to_json_line() const;
};

using ConsistencyOracle = std::function<bool(std::string_view candidate)>;

/// Counts the dictionary candidates the oracle accepts. The oracle must be
/// deterministic per candidate; the true password, when present, is never
/// eliminated by construction of the per-protocol oracles.
AttackOutcome offline_filter(const Dictionary& dict, const ConsistencyOracle& oracle);

/// What a Type III/IV attacker holds after stealing an SSCA card.
struct SscaTranscript {
    std::string card_identity;
    std::string server_identity;
    Bytes blob1;   // E_K(C || R_c) as sent, nonce included
    Bytes blob2;   // E_K(C || R_s)
    Bytes tag_s;   // C_s
    Bytes tag_c;   // C_c
};

struct SscaOfflineView {
    Bytes wrapped_key;  // card memory
    std::string card_identity;
    std::string server_identity;
    std::optional<SscaTranscript> transcript;  // present under Type III/IV, absent under primes
};

/// With a transcript: unwrap under the candidate, decrypt both blobs, check
/// the identity fields and recompute both HMAC tags. Without one there is
/// nothing the wrapped key can be tested against and every candidate passes.
ConsistencyOracle ssca_consistency_oracle(const SscaOfflineView& view);

/// Reversed-confirmation-order attack against PSCAb (stolen D, one server
/// session). With the secure card-first ordering the same attacker receives
/// no server tag and the whole dictionary survives.
AttackOutcome attack_pscab_reversed(const GroupSuite& suite, const pscab::SystemParams& params,
                                    Scalar beta, const GroupElement& stolen_blinded_key,
                                    std::string_view card_identity, bool server_secure_order,
                                    const Dictionary& dict, std::uint64_t seed);

/// Same attack shape against PSCAV (stolen W).
AttackOutcome attack_pscav_reversed(const GroupSuite& suite, const pscav::ServerRecord& record,
                                    std::string_view server_identity,
                                    const GroupElement& stolen_blinded_generator,
                                    bool server_secure_order, const Dictionary& dict,
                                    std::uint64_t seed);

/// Small-subgroup MITM against an unprotected Diffie-Hellman baseline that
/// exists only inside this module. Requires a cofactor t > 1 suite, else the
/// outcome reports not applicable. Recovers the confined key in <= t guesses.
AttackOutcome attack_small_subgroup(const GroupSuite& suite, std::uint64_t seed);

/// Drives an honest card against the reversed-confirmation server variant
/// (inside the lab, which owns the variant's harness token). Returns true iff
/// the handshake completes with matching keys: the insecure ordering changes
/// what leaks, not whether honest runs work. pscab/pscabv/pscav only.
bool variant_honest_run(wire::ProtocolId protocol, std::uint64_t seed);

/// Registered scenarios: eavesdrop, replay, mitm, malicious-reader,
/// stolen-card-query, stolen-card-read, memory-stick, counter-exhaustion,
/// pscab-reversed, pscab-secure, pscav-reversed, pscav-secure.
/// Deterministic per (name, protocol, model, dict, seed).
/// Throws UnknownScenario for unregistered names.
AttackOutcome run_scenario(std::string_view name, wire::ProtocolId protocol,
                           const AttackerModel& model, const Dictionary& dict,
                           std::uint64_t seed);

std::vector<std::string> scenario_names();

}  // namespace scauth::adversary

#endif  // SCAUTH_ADVERSARY_HPP
