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

#include "scauth/suite.hpp"

#include <sodium.h>

#include <array>
#include <bit>
#include <stdexcept>

namespace scauth {

namespace {

using u128 = unsigned __int128;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((u128(a) * b) % m);
}

std::uint64_t addmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((u128(a) + b) % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    base %= m;
    while (e) {
        if (e & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        e >>= 1;
    }
    return r;
}

// Deterministic Miller-Rabin for 64-bit inputs.
bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

std::uint64_t reduce_digest_mod(const Bytes& digest, std::uint64_t m) {
    // 128 bits of digest mod m; bias is ~2^-67 for 61-bit moduli.
    u128 acc = 0;
    for (int i = 0; i < 16; ++i) acc = (acc << 8) | digest[static_cast<std::size_t>(i)];
    return static_cast<std::uint64_t>(acc % m);
}

void put_beW(Bytes& out, std::uint64_t v, std::size_t width) {
    for (std::size_t i = 0; i < width; ++i) {
        out.push_back(static_cast<std::uint8_t>(v >> (8 * (width - 1 - i))));
    }
}

std::optional<std::uint64_t> get_beW(ByteView in, std::size_t width) {
    if (in.size() != width || width > 8) return std::nullopt;
    std::uint64_t v = 0;
    for (std::uint8_t b : in) v = v << 8 | b;
    return v;
}

}  // namespace

ByteView role_tag(HashRole role) {
    static const std::string tags[] = {
        "scauth/h2g:", "scauth/h2s:", "scauth/pi:",
        "scauth/kdf:", "scauth/sk:",  "scauth/wrap:",
    };
    const std::string& t = tags[static_cast<std::size_t>(role)];
    return ByteView(reinterpret_cast<const std::uint8_t*>(t.data()), t.size());
}

GroupConfig GroupConfig::standard() {
    return GroupConfig{(1ull << 61) - 1, 1, 0x11, 0x01};
}

GroupConfig GroupConfig::small(std::uint64_t q, std::uint64_t t, std::uint8_t suite_id) {
    return GroupConfig{q, t, suite_id, 0x01};
}

void GroupConfig::validate() const {
    if (t < 1) throw std::invalid_argument("cofactor t must be >= 1");
    if (suite_id >= 0x80) throw std::invalid_argument("suite_id must be < 0x80");
    if (hash_id != 0x01) throw std::invalid_argument("unregistered hash_id");
    if (q < 2 || !is_prime_u64(q)) throw std::invalid_argument("q must be prime");
    if (u128(q) * t >= (u128(1) << 63)) throw std::invalid_argument("group order q*t too large");
}

GroupSuite::GroupSuite(GroupConfig cfg) : cfg_(cfg) {
    cfg_.validate();
    unsigned bits = 64u - static_cast<unsigned>(std::countl_zero(cfg_.order()));
    width_ = (bits + 7) / 8;
}

GroupElement GroupSuite::element_from_exponent(std::uint64_t e) const {
    return {e % cfg_.order(), cfg_.suite_id};
}

Scalar GroupSuite::scalar_add(Scalar a, Scalar b) const {
    return {addmod(a.v, b.v, cfg_.q)};
}

Scalar GroupSuite::scalar_sub(Scalar a, Scalar b) const {
    return {addmod(a.v, cfg_.q - b.v % cfg_.q, cfg_.q)};
}

Scalar GroupSuite::scalar_mul(Scalar a, Scalar b) const {
    return {mulmod(a.v, b.v, cfg_.q)};
}

Scalar GroupSuite::scalar_inverse(Scalar k) const {
    std::uint64_t v = k.v % cfg_.q;
    if (v == 0) throw std::domain_error("scalar 0 has no inverse mod q");
    return {powmod(v, cfg_.q - 2, cfg_.q)};  // q prime
}

void GroupSuite::check_suite(const GroupElement& x) const {
    if (x.suite_ != cfg_.suite_id) throw std::invalid_argument("group element from a different suite");
}

GroupElement GroupSuite::exp(const GroupElement& base, Scalar k) const {
    check_suite(base);
    return {mulmod(base.e_, k.v, cfg_.order()), cfg_.suite_id};
}

GroupElement GroupSuite::exp_raw(const GroupElement& base, std::uint64_t k) const {
    check_suite(base);
    return {mulmod(base.e_, k % cfg_.order(), cfg_.order()), cfg_.suite_id};
}

GroupElement GroupSuite::mul(const GroupElement& a, const GroupElement& b) const {
    check_suite(a);
    check_suite(b);
    return {addmod(a.e_, b.e_, cfg_.order()), cfg_.suite_id};
}

bool GroupSuite::is_in_subgroup(const GroupElement& x) const {
    check_suite(x);
    return x.e_ % cfg_.t == 0;
}

TargetElement GroupSuite::pair(const GroupElement& a, const GroupElement& b) const {
    if (!is_in_subgroup(a) || !is_in_subgroup(b)) {
        throw std::domain_error("pairing input outside the prime-order subgroup");
    }
    std::uint64_t ea = (a.e_ / cfg_.t) % cfg_.q;
    std::uint64_t eb = (b.e_ / cfg_.t) % cfg_.q;
    return {mulmod(ea, eb, cfg_.q), cfg_.suite_id};
}

TargetElement GroupSuite::target_exp(const TargetElement& base, Scalar k) const {
    if (base.suite_ != cfg_.suite_id) throw std::invalid_argument("target element from a different suite");
    return {mulmod(base.e_, k.v, cfg_.q), cfg_.suite_id};
}

GroupElement GroupSuite::hash_to_group(HashRole role, ByteView msg) const {
    if (role != HashRole::H2G) throw std::invalid_argument("hash_to_group requires the H2G role");
    Scalar e = hash_to_scalar_internal(role, msg);
    return {cfg_.t * e.v % cfg_.order(), cfg_.suite_id};
}

Scalar GroupSuite::hash_to_scalar(HashRole role, ByteView msg) const {
    if (role == HashRole::H2G || role == HashRole::WRAP) {
        throw std::invalid_argument("hash_to_scalar requires a scalar role");
    }
    return hash_to_scalar_internal(role, msg);
}

Scalar GroupSuite::hash_to_scalar_internal(HashRole role, ByteView msg) const {
    ByteView tag = role_tag(role);
    Bytes buf(tag.begin(), tag.end());
    put_field(buf, msg);
    buf.push_back(0);  // retry counter
    for (int ctr = 0; ctr < 256; ++ctr) {
        buf.back() = static_cast<std::uint8_t>(ctr);
        std::uint64_t v = reduce_digest_mod(sha256(buf), cfg_.q);
        if (v != 0) return {v};
    }
    throw std::runtime_error("hash_to_scalar: rejection loop exhausted");
}

Bytes GroupSuite::encode(const GroupElement& x) const {
    check_suite(x);
    Bytes out;
    out.reserve(1 + width_);
    out.push_back(cfg_.suite_id);
    put_beW(out, x.e_, width_);
    return out;
}

Bytes GroupSuite::encode(const TargetElement& x) const {
    if (x.suite_ != cfg_.suite_id) throw std::invalid_argument("target element from a different suite");
    Bytes out;
    out.reserve(1 + width_);
    out.push_back(static_cast<std::uint8_t>(cfg_.suite_id | 0x80));
    put_beW(out, x.e_, width_);
    return out;
}

Bytes GroupSuite::encode_scalar(Scalar k) const {
    Bytes out;
    out.reserve(width_);
    put_beW(out, k.v % cfg_.q, width_);
    return out;
}

std::optional<GroupElement> GroupSuite::decode_element(ByteView in) const {
    if (in.size() != 1 + width_ || in[0] != cfg_.suite_id) return std::nullopt;
    auto e = get_beW(in.subspan(1), width_);
    if (!e || *e >= cfg_.order()) return std::nullopt;
    return GroupElement{*e, cfg_.suite_id};
}

std::optional<TargetElement> GroupSuite::decode_target(ByteView in) const {
    if (in.size() != 1 + width_ || in[0] != (cfg_.suite_id | 0x80)) return std::nullopt;
    auto e = get_beW(in.subspan(1), width_);
    if (!e || *e >= cfg_.q) return std::nullopt;
    return TargetElement{*e, cfg_.suite_id};
}

std::optional<Scalar> GroupSuite::decode_scalar(ByteView in) const {
    auto v = get_beW(in, width_);
    if (!v || *v >= cfg_.q) return std::nullopt;
    return Scalar{*v};
}

Bytes sha256(ByteView msg) {
    Bytes out(crypto_hash_sha256_BYTES);
    crypto_hash_sha256(out.data(), msg.data(), msg.size());
    return out;
}

Bytes hmac(ByteView key, ByteView msg) {
    crypto_auth_hmacsha256_state st;
    crypto_auth_hmacsha256_init(&st, key.data(), key.size());
    crypto_auth_hmacsha256_update(&st, msg.data(), msg.size());
    Bytes out(crypto_auth_hmacsha256_BYTES);
    crypto_auth_hmacsha256_final(&st, out.data());
    return out;
}

Bytes role_hash(HashRole role, std::initializer_list<ByteView> parts) {
    ByteView tag = role_tag(role);
    Bytes buf(tag.begin(), tag.end());
    for (ByteView p : parts) put_field(buf, p);
    return sha256(buf);
}

Bytes stream_xor(ByteView key32, ByteView nonce8, ByteView data) {
    if (key32.size() != crypto_stream_chacha20_KEYBYTES) throw std::invalid_argument("stream key must be 32 bytes");
    if (nonce8.size() != crypto_stream_chacha20_NONCEBYTES) throw std::invalid_argument("stream nonce must be 8 bytes");
    Bytes out(data.size());
    crypto_stream_chacha20_xor(out.data(), data.data(), data.size(), nonce8.data(), key32.data());
    return out;
}

Bytes wrap_key(std::string_view password, ByteView plain) {
    Bytes key = role_hash(HashRole::WRAP, {to_bytes(password)});
    static const std::array<std::uint8_t, 8> zero_nonce{};
    Bytes out = stream_xor(key, ByteView(zero_nonce), plain);
    secure_wipe(key);
    return out;
}

Bytes unwrap_key(std::string_view password, ByteView wrapped) {
    return wrap_key(password, wrapped);  // XOR stream, self-inverse
}

std::string session_check_value(ByteView session_key) {
    Bytes d = role_hash(HashRole::KDF, {session_key, to_bytes("check")});
    return to_hex(ByteView(d).first(8));
}

}  // namespace scauth
