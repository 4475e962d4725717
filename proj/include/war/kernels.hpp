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

// Data-parallel inner loops of the map algebra.
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant selected at runtime. The variants are required to agree bit for
// bit: elementwise kernels use the same operation sequence (no FMA), and
// reductions accumulate in four interleaved lanes in both implementations.

#pragma once

#include <cstddef>
#include <string_view>

namespace war::kernels {

struct Table {
  const char* name;

  // out[i] = piecewise-linear interpolant of values[0..m] (uniform grid on
  // [0, 1], m segments) evaluated at xs[i]. Arguments are clamped to [0, 1]
  // and snapped onto grid nodes when within rounding distance of one.
  void (*interp)(const double* values, std::size_t m, const double* xs,
                 double* out, std::size_t n);

  // out[i] = a[i] + w * (b[i] - a[i])
  void (*blend)(const double* a, const double* b, double w, double* out,
                std::size_t n);

  // acc[i] += x[i]
  void (*accumulate)(const double* x, double* acc, std::size_t n);

  // x[i] *= w
  void (*scale)(double* x, double w, std::size_t n);

  // sum_i (a[i] - b[i])^2
  double (*sum_sq_diff)(const double* a, const double* b, std::size_t n);

  // sum_i |a[i] - b[i]|
  double (*sum_abs_diff)(const double* a, const double* b, std::size_t n);

  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
};

const Table& scalar_table();

/// nullptr when the binary or the CPU lacks AVX2.
const Table* avx2_table();

/// The table used by the library. Chosen once: AVX2 when available, unless
/// the environment variable WAR_KERNELS=scalar forces the reference path.
const Table& active();

/// Override the active table ("scalar" or "avx2"). Returns false when the
/// requested variant is unavailable. Not thread-safe; call before any work.
bool select(std::string_view name);

}  // namespace war::kernels
