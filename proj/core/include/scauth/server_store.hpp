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

#ifndef SCAUTH_SERVER_STORE_HPP
#define SCAUTH_SERVER_STORE_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "scauth/suite.hpp"
#include "scauth/wire.hpp"

namespace scauth {

/// Line-oriented server database. Layout:
///
///   config:<q>:<t>:<suite>:<hash>:<hex S>
///   master:<pid>:<hex secret>          (at most one per protocol)
///   <pid>:<hex C>:<hex field>...       (per-identity records, insertion order)
///
/// Hex is lowercase and fixed width. SSCA and PSCAb keep only a master line;
/// PSCAbV records the per-user generator, PSCAV the generator and verifier.
struct ServerStore {
    struct Record {
        std::uint8_t protocol_id = 0;
        std::string identity;
        std::vector<Bytes> fields;
    };

    GroupConfig group;
    std::string server_identity;
    std::map<std::uint8_t, Bytes> masters;
    std::vector<Record> records;

    const Record* find(std::uint8_t protocol_id, std::string_view identity) const;
    /// One record per (protocol, identity): replaces any existing entry.
    void upsert(Record record);

    std::string save_text() const;
    /// Throws std::runtime_error on malformed input.
    static ServerStore load_text(std::string_view text);

    void save_file(const std::string& path) const;
    static ServerStore load_file(const std::string& path);
};

}  // namespace scauth

#endif  // SCAUTH_SERVER_STORE_HPP
