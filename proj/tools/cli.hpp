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

#include <ostream>
#include <string>
#include <vector>

namespace war::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;   // bad flags, config, domain or input errors
inline constexpr int kExitNumeric = 3;  // degenerate maps and other numeric failures

/// Runs the `war` command line. Results go to `out`; errors go to `err` as
/// a single JSON object {"error": {"kind": ..., "message": ...}}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace war::cli
