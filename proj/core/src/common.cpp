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

#include "scauth/common.hpp"

#include <sodium.h>

#include <algorithm>
#include <stdexcept>

namespace scauth {

Bytes to_bytes(std::string_view s) {
    return Bytes(s.begin(), s.end());
}

std::string to_string(ByteView b) {
    return std::string(reinterpret_cast<const char*>(b.data()), b.size());
}

std::string to_hex(ByteView b) {
    static const char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(b.size() * 2);
    for (std::uint8_t v : b) {
        out.push_back(digits[v >> 4]);
        out.push_back(digits[v & 0x0f]);
    }
    return out;
}

namespace {
int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}
}  // namespace

Bytes from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0) throw std::invalid_argument("hex string has odd length");
    Bytes out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        int hi = hex_nibble(hex[2 * i]);
        int lo = hex_nibble(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) throw std::invalid_argument("invalid hex character");
        out[i] = static_cast<std::uint8_t>(hi << 4 | lo);
    }
    return out;
}

void put_be32(Bytes& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

void put_be64(Bytes& out, std::uint64_t v) {
    put_be32(out, static_cast<std::uint32_t>(v >> 32));
    put_be32(out, static_cast<std::uint32_t>(v));
}

std::uint32_t get_be32(const std::uint8_t* p) {
    return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
           (std::uint32_t(p[2]) << 8) | std::uint32_t(p[3]);
}

std::uint64_t get_be64(const std::uint8_t* p) {
    return (std::uint64_t(get_be32(p)) << 32) | get_be32(p + 4);
}

void put_field(Bytes& out, ByteView f) {
    put_be32(out, static_cast<std::uint32_t>(f.size()));
    out.insert(out.end(), f.begin(), f.end());
}

std::optional<ByteView> FieldReader::next() {
    if (rest_.size() < 4) return std::nullopt;
    std::uint32_t len = get_be32(rest_.data());
    if (rest_.size() - 4 < len) return std::nullopt;
    ByteView field = rest_.subspan(4, len);
    rest_ = rest_.subspan(4 + len);
    return field;
}

std::optional<ByteView> FieldReader::next(std::size_t expected_len) {
    auto f = next();
    if (!f || f->size() != expected_len) return std::nullopt;
    return f;
}

bool ct_equal(ByteView a, ByteView b) {
    if (a.size() != b.size()) return false;
    if (a.empty()) return true;
    return sodium_memcmp(a.data(), b.data(), a.size()) == 0;
}

void secure_wipe(void* p, std::size_t n) {
    if (p != nullptr && n > 0) sodium_memzero(p, n);
}

void secure_wipe(Bytes& b) {
    secure_wipe(b.data(), b.size());
    b.clear();
}

void secure_wipe(std::string& s) {
    secure_wipe(s.data(), s.size());
    s.clear();
}

bool contains_bytes(ByteView hay, ByteView needle) {
    if (needle.empty()) return true;
    if (hay.size() < needle.size()) return false;
    auto it = std::search(hay.begin(), hay.end(), needle.begin(), needle.end());
    return it != hay.end();
}

}  // namespace scauth
