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

#ifndef SCAUTH_RAND_HPP
#define SCAUTH_RAND_HPP

#include <cstdint>
#include <span>

#include "scauth/chain_rng.hpp"
#include "scauth/suite.hpp"

namespace scauth {

/// Server-side randomness source. Cards draw from their own chain RNG; the
/// server and test harnesses inject one of these.
class Rand {
public:
    virtual ~Rand() = default;
    virtual void fill(std::span<std::uint8_t> out) = 0;

    Bytes bytes(std::size_t n);
};

/// Operating-system randomness.
class SystemRand final : public Rand {
public:
    void fill(std::span<std::uint8_t> out) override;
};

/// Deterministic stream for seeded runs; same seed, same stream.
class SeededRand final : public Rand {
public:
    explicit SeededRand(std::uint64_t seed);
    SeededRand(std::uint64_t seed, std::string_view context);
    void fill(std::span<std::uint8_t> out) override;

private:
    RngState state_;
};

/// Uniform scalar in Z_q* (rejection sampling).
Scalar random_scalar(const GroupSuite& suite, Rand& rng);

/// Uniform scalar in Z_q* drawn from a card's chain RNG.
Scalar card_scalar(const GroupSuite& suite, RngState& rng);

}  // namespace scauth

#endif  // SCAUTH_RAND_HPP
