// Copyright 2026 The busqed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>

namespace busqed {

// Bad user input: config files, CLI values, parameter paths, device
// validation. Maps to exit code 1.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An evolution violated one of its runtime invariants (stability guard,
// norm/trace drift, positivity, sector leakage). Maps to exit code 2.
class IntegratorError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace busqed
