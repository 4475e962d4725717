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

namespace war::kernels::detail {

// Grid positions x * m closer than this to an integer are treated as nodes,
// so evaluation at k / m returns values[k] exactly.
inline constexpr double kSnapTolerance = 1e-9;

}  // namespace war::kernels::detail
