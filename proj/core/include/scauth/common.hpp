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

#ifndef SCAUTH_COMMON_HPP
#define SCAUTH_COMMON_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace scauth {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

Bytes to_bytes(std::string_view s);
std::string to_string(ByteView b);

/// Lowercase, fixed-width hex.
std::string to_hex(ByteView b);
/// Throws std::invalid_argument on odd length or non-hex characters.
Bytes from_hex(std::string_view hex);

void put_be32(Bytes& out, std::uint32_t v);
void put_be64(Bytes& out, std::uint64_t v);
std::uint32_t get_be32(const std::uint8_t* p);
std::uint64_t get_be64(const std::uint8_t* p);

/// Length-prefixed field: be32(len) || bytes. All composite hash inputs and
/// frame payloads in this project use this encoding.
void put_field(Bytes& out, ByteView f);
inline void put_field(Bytes& out, std::string_view f) { put_field(out, to_bytes(f)); }

/// Sequential reader for length-prefixed fields.
class FieldReader {
public:
    explicit FieldReader(ByteView data) : rest_(data) {}

    std::optional<ByteView> next();
    std::optional<ByteView> next(std::size_t expected_len);
    bool done() const { return rest_.empty(); }

private:
    ByteView rest_;
};

/// Constant-time equality; false on length mismatch.
bool ct_equal(ByteView a, ByteView b);

void secure_wipe(void* p, std::size_t n);
void secure_wipe(Bytes& b);
void secure_wipe(std::string& s);

/// True if `needle` occurs as a contiguous byte substring of `hay`.
bool contains_bytes(ByteView hay, ByteView needle);

}  // namespace scauth

#endif  // SCAUTH_COMMON_HPP
