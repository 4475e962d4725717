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

#include <algorithm>
#include <cmath>

#include "kernels/snap.hpp"
#include "war/kernels.hpp"

namespace war::kernels {
namespace {

void interp_scalar(const double* values, std::size_t m, const double* xs,
                   double* out, std::size_t n) {
  const double md = static_cast<double>(m);
  const double last = static_cast<double>(m - 1);
  for (std::size_t i = 0; i < n; ++i) {
    double x = std::max(std::min(xs[i], 1.0), 0.0);
    double pos = x * md;
    const double r = std::nearbyint(pos);
    if (std::fabs(pos - r) <= detail::kSnapTolerance) pos = r;
    const double fl = std::min(std::floor(pos), last);
    const double frac = pos - fl;
    const auto k = static_cast<std::size_t>(fl);
    const double lo = values[k];
    const double hi = values[k + 1];
    out[i] = lo + frac * (hi - lo);
  }
}

void blend_scalar(const double* a, const double* b, double w, double* out,
                  std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + w * (b[i] - a[i]);
}

void accumulate_scalar(const double* x, double* acc, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += x[i];
}

void scale_scalar(double* x, double w, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= w;
}

// Four interleaved partial sums, combined as (s0 + s1) + (s2 + s3). The AVX2
// reductions use exactly this order.
template <typename Term>
double lane_sum(std::size_t n, Term term) {
  double s[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t body = n - n % 4;
  for (std::size_t i = 0; i < body; i += 4) {
    s[0] += term(i);
    s[1] += term(i + 1);
    s[2] += term(i + 2);
    s[3] += term(i + 3);
  }
  for (std::size_t i = body; i < n; ++i) s[i - body] += term(i);
  return (s[0] + s[1]) + (s[2] + s[3]);
}

double sum_sq_diff_scalar(const double* a, const double* b, std::size_t n) {
  return lane_sum(n, [&](std::size_t i) {
    const double d = a[i] - b[i];
    return d * d;
  });
}

double sum_abs_diff_scalar(const double* a, const double* b, std::size_t n) {
  return lane_sum(n, [&](std::size_t i) { return std::fabs(a[i] - b[i]); });
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  return lane_sum(n, [&](std::size_t i) { return a[i] * b[i]; });
}

}  // namespace

const Table& scalar_table() {
  static const Table table{"scalar",          interp_scalar,       blend_scalar,
                           accumulate_scalar, scale_scalar,        sum_sq_diff_scalar,
                           sum_abs_diff_scalar, dot_scalar};
  return table;
}

}  // namespace war::kernels
