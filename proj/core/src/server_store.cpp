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

#include "scauth/server_store.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace scauth {

namespace {

std::string hex_u64(std::uint64_t v) {
    Bytes b;
    put_be64(b, v);
    return to_hex(b);
}

std::string hex_byte(std::uint8_t v) {
    return to_hex(ByteView(&v, 1));
}

std::vector<std::string> split_colon(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        std::size_t pos = line.find(':', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

std::uint64_t parse_hex_u64(const std::string& s) {
    Bytes b = from_hex(s);
    if (b.size() != 8) throw std::runtime_error("server store: bad u64 field");
    return get_be64(b.data());
}

std::uint8_t parse_hex_byte(const std::string& s) {
    Bytes b = from_hex(s);
    if (b.size() != 1) throw std::runtime_error("server store: bad byte field");
    return b[0];
}

}  // namespace

const ServerStore::Record* ServerStore::find(std::uint8_t protocol_id,
                                             std::string_view identity) const {
    for (const Record& r : records) {
        if (r.protocol_id == protocol_id && r.identity == identity) return &r;
    }
    return nullptr;
}

void ServerStore::upsert(Record record) {
    for (Record& r : records) {
        if (r.protocol_id == record.protocol_id && r.identity == record.identity) {
            r = std::move(record);
            return;
        }
    }
    records.push_back(std::move(record));
}

std::string ServerStore::save_text() const {
    std::ostringstream out;
    out << "config:" << hex_u64(group.q) << ':' << hex_u64(group.t) << ':'
        << hex_byte(group.suite_id) << ':' << hex_byte(group.hash_id) << ':'
        << to_hex(to_bytes(server_identity)) << '\n';
    for (const auto& [pid, secret] : masters) {
        out << "master:" << hex_byte(pid) << ':' << to_hex(secret) << '\n';
    }
    for (const Record& r : records) {
        out << hex_byte(r.protocol_id) << ':' << to_hex(to_bytes(r.identity));
        for (const Bytes& f : r.fields) out << ':' << to_hex(f);
        out << '\n';
    }
    return out.str();
}

ServerStore ServerStore::load_text(std::string_view text) {
    ServerStore store;
    bool saw_config = false;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto parts = split_colon(line);
        if (parts[0] == "config") {
            if (parts.size() != 6) throw std::runtime_error("server store: bad config line");
            store.group.q = parse_hex_u64(parts[1]);
            store.group.t = parse_hex_u64(parts[2]);
            store.group.suite_id = parse_hex_byte(parts[3]);
            store.group.hash_id = parse_hex_byte(parts[4]);
            store.server_identity = to_string(from_hex(parts[5]));
            store.group.validate();
            saw_config = true;
        } else if (parts[0] == "master") {
            if (parts.size() != 3) throw std::runtime_error("server store: bad master line");
            store.masters[parse_hex_byte(parts[1])] = from_hex(parts[2]);
        } else {
            if (parts.size() < 2) throw std::runtime_error("server store: bad record line");
            Record r;
            r.protocol_id = parse_hex_byte(parts[0]);
            if (!wire::known_protocol(r.protocol_id)) {
                throw std::runtime_error("server store: unknown protocol id");
            }
            r.identity = to_string(from_hex(parts[1]));
            for (std::size_t i = 2; i < parts.size(); ++i) r.fields.push_back(from_hex(parts[i]));
            store.records.push_back(std::move(r));
        }
    }
    if (!saw_config) throw std::runtime_error("server store: missing config line");
    return store;
}

void ServerStore::save_file(const std::string& path) const {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write server store: " + path);
    out << save_text();
    if (!out) throw std::runtime_error("short write to server store: " + path);
}

ServerStore ServerStore::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read server store: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return load_text(buf.str());
}

}  // namespace scauth
