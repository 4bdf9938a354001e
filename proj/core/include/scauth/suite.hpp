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

#ifndef SCAUTH_SUITE_HPP
#define SCAUTH_SUITE_HPP

#include <cstdint>
#include <initializer_list>
#include <optional>

#include "scauth/common.hpp"

namespace scauth {

/// Domain-separation roles for the suite's single 256-bit hash.
/// Outputs of different roles on equal inputs are unrelated.
enum class HashRole : std::uint8_t {
    H2G,   // hash-to-group
    H2S,   // hash-to-scalar (password scalars)
    PI,    // the ordered-pair scalar map pi(., .)
    KDF,   // session-key / confirmation-key derivation
    SK,    // confirmation hashing over a raw session-key element
    WRAP,  // password key-wrap key
};

ByteView role_tag(HashRole role);

/// Parameters of a debug group instance. The debug group is cyclic of total
/// order n = q*t with a distinguished subgroup of prime order q; t > 1 exists
/// solely to demonstrate small-subgroup behaviour.
struct GroupConfig {
    std::uint64_t q = 0;       // prime subgroup order
    std::uint64_t t = 1;       // cofactor, 1 = prime-order group
    std::uint8_t suite_id = 0x11;
    std::uint8_t hash_id = 0x01;  // 0x01 = SHA-256, the only registered hash

    std::uint64_t order() const { return q * t; }

    /// q = 2^61 - 1 (Mersenne prime), t = 1. Default for protocol runs.
    static GroupConfig standard();
    /// Tiny hand-checkable groups for unit examples, e.g. q = 11.
    static GroupConfig small(std::uint64_t q, std::uint64_t t = 1, std::uint8_t suite_id = 0x0b);

    /// Throws std::invalid_argument unless q is prime, t >= 1, q*t < 2^63
    /// and suite_id < 0x80 (the high bit marks target-group encodings).
    void validate() const;

    bool operator==(const GroupConfig&) const = default;
};

/// Element of the debug group. The backend handle is the discrete logarithm
/// e in Z_n relative to a fixed generator of order n; this makes every
/// algebraic identity in the protocols exactly checkable. A real
/// pairing-group backend would slot in behind the same GroupSuite interface.
class GroupElement {
public:
    GroupElement() = default;
    bool operator==(const GroupElement&) const = default;

    /// Debug-backend readback; meaningful only for tests and the attack lab.
    std::uint64_t debug_exponent() const { return e_; }
    std::uint8_t suite_id() const { return suite_; }

private:
    friend class GroupSuite;
    GroupElement(std::uint64_t e, std::uint8_t suite) : e_(e), suite_(suite) {}
    std::uint64_t e_ = 0;
    std::uint8_t suite_ = 0;
};

/// Element of the pairing target group; debug exponent lives in Z_q.
class TargetElement {
public:
    TargetElement() = default;
    bool operator==(const TargetElement&) const = default;

    std::uint64_t debug_exponent() const { return e_; }

private:
    friend class GroupSuite;
    TargetElement(std::uint64_t e, std::uint8_t suite) : e_(e), suite_(suite) {}
    std::uint64_t e_ = 0;
    std::uint8_t suite_ = 0;
};

/// Scalar in Z_q, kept as the reduced representative.
struct Scalar {
    std::uint64_t v = 0;
    bool operator==(const Scalar&) const = default;
};

/// The abstract algebraic substrate: group, scalars, pairing, domain-separated
/// hash family, plus the byte encodings. All operations are pure and
/// stateless; a GroupSuite may be shared freely across threads.
class GroupSuite {
public:
    explicit GroupSuite(GroupConfig cfg);

    const GroupConfig& config() const { return cfg_; }
    /// Fixed encoding width of scalars and element exponents: ceil(bits(n)/8).
    std::size_t scalar_width() const { return width_; }

    GroupElement identity() const { return {0, cfg_.suite_id}; }
    /// Generator of the full group of order n = q*t.
    GroupElement generator() const { return {1 % cfg_.order(), cfg_.suite_id}; }
    /// Canonical generator of the order-q subgroup (g^t).
    GroupElement subgroup_generator() const { return {cfg_.t % cfg_.order(), cfg_.suite_id}; }
    TargetElement target_identity() const { return {0, cfg_.suite_id}; }

    /// Test-only constructor from a raw debug exponent (reduced mod n).
    GroupElement element_from_exponent(std::uint64_t e) const;

    Scalar scalar_from_u64(std::uint64_t v) const { return {v % cfg_.q}; }
    Scalar scalar_add(Scalar a, Scalar b) const;
    Scalar scalar_sub(Scalar a, Scalar b) const;
    Scalar scalar_mul(Scalar a, Scalar b) const;
    /// k^-1 mod q; throws std::domain_error when k == 0 mod q.
    Scalar scalar_inverse(Scalar k) const;

    /// base^k with exponent arithmetic mod n.
    GroupElement exp(const GroupElement& base, Scalar k) const;
    /// base^k for a full-range exponent in Z_n. Protocol code never needs
    /// this; it exists for the unprotected DH baseline and tests.
    GroupElement exp_raw(const GroupElement& base, std::uint64_t k) const;
    /// Group product; throws std::invalid_argument on mismatched suite ids.
    GroupElement mul(const GroupElement& a, const GroupElement& b) const;

    /// Symmetric bilinear map into the target group. Both inputs must lie in
    /// the order-q subgroup (throws std::domain_error otherwise). For honest
    /// elements a = g^(t*ea'), b = g^(t*eb') the result has target exponent
    /// ea'*eb' mod q, so pair(x^a, y^b) = pair(x, y)^(ab) exactly.
    TargetElement pair(const GroupElement& a, const GroupElement& b) const;
    TargetElement target_exp(const TargetElement& base, Scalar k) const;

    bool is_identity(const GroupElement& x) const { return x.e_ == 0; }
    /// Membership in the order-q subgroup: x^q == identity (debug: e % t == 0).
    bool is_in_subgroup(const GroupElement& x) const;

    /// Deterministic hash into the order-q subgroup, excluding the identity
    /// (the protocols use these outputs as per-identity generators).
    GroupElement hash_to_group(HashRole role, ByteView msg) const;
    /// Deterministic hash into Z_q*; rejects 0 by re-hashing with an
    /// incremented trailing counter byte.
    Scalar hash_to_scalar(HashRole role, ByteView msg) const;

    Bytes encode(const GroupElement& x) const;
    Bytes encode(const TargetElement& x) const;
    Bytes encode_scalar(Scalar k) const;
    std::optional<GroupElement> decode_element(ByteView in) const;
    std::optional<TargetElement> decode_target(ByteView in) const;
    std::optional<Scalar> decode_scalar(ByteView in) const;

private:
    void check_suite(const GroupElement& x) const;
    Scalar hash_to_scalar_internal(HashRole role, ByteView msg) const;
    GroupConfig cfg_;
    std::size_t width_;
};

/// SHA-256 (hash_id 0x01), 32-byte output.
Bytes sha256(ByteView msg);

/// HMAC over the suite's fixed hash, arbitrary key length, 32-byte tag.
Bytes hmac(ByteView key, ByteView msg);

/// 32-byte digest of role tag || lp(part_0) || lp(part_1) || ...
Bytes role_hash(HashRole role, std::initializer_list<ByteView> parts);

/// Unauthenticated stream-cipher XOR (ChaCha20); key 32 bytes, nonce 8 bytes.
Bytes stream_xor(ByteView key32, ByteView nonce8, ByteView data);

/// Password key-wrap: stream cipher keyed by the WRAP-role hash of the
/// password, fixed zero nonce, no integrity tag. unwrap never fails — every
/// password yields some equal-length output, so a wrong guess is not
/// detectable offline.
Bytes wrap_key(std::string_view password, ByteView plain);
Bytes unwrap_key(std::string_view password, ByteView wrapped);

/// 16-hex-char session-key check value: truncation of KDF-role hash over
/// (sk, "check"). Safe to print and log; never reveals sk itself.
std::string session_check_value(ByteView session_key);

}  // namespace scauth

#endif  // SCAUTH_SUITE_HPP
