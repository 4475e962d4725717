// Copyright 2026 The war Authors
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
#include <string>

namespace war {

/// Argument outside the mathematical domain of an operation (alpha out of
/// range, x outside [0, 1], p < 1, mismatched intervals).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A map failed the strict-monotonicity / endpoint invariants of UnitMap.
class DegenerateMapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or insufficient input data (short series, unparseable files).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inconsistent configuration (missing reference measure, bad flags).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace war
