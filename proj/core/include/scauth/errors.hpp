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

#ifndef SCAUTH_ERRORS_HPP
#define SCAUTH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace scauth {

/// Thrown when a counter-limited card has exhausted its query budget;
/// the card zeroizes its secret material before throwing.
struct CardDestroyed : std::runtime_error {
    CardDestroyed() : std::runtime_error("card destroyed: query counter exhausted") {}
};

struct UnknownScenario : std::invalid_argument {
    explicit UnknownScenario(const std::string& name)
        : std::invalid_argument("unknown scenario: " + name) {}
};

}  // namespace scauth

#endif  // SCAUTH_ERRORS_HPP
