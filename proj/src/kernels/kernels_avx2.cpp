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

// AVX2 variants. This translation unit is the only one compiled with -mavx2;
// nothing here may be called unless the CPU reports AVX2.

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "kernels/snap.hpp"
#include "war/kernels.hpp"

namespace war::kernels {
namespace {

inline __m256d abs_pd(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

void interp_avx2(const double* values, std::size_t m, const double* xs,
                 double* out, std::size_t n) {
  const double md = static_cast<double>(m);
  const double last = static_cast<double>(m - 1);
  const __m256d vm = _mm256_set1_pd(md);
  const __m256d vlast = _mm256_set1_pd(last);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d tol = _mm256_set1_pd(detail::kSnapTolerance);

  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d x = _mm256_loadu_pd(xs + i);
    // Same argument order as std::max(std::min(x, 1), 0).
    x = _mm256_max_pd(_mm256_min_pd(x, one), zero);
    __m256d pos = _mm256_mul_pd(x, vm);
    const __m256d r =
        _mm256_round_pd(pos, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    const __m256d near = _mm256_cmp_pd(abs_pd(_mm256_sub_pd(pos, r)), tol, _CMP_LE_OQ);
    pos = _mm256_blendv_pd(pos, r, near);
    const __m256d fl = _mm256_min_pd(_mm256_floor_pd(pos), vlast);
    const __m256d frac = _mm256_sub_pd(pos, fl);
    const __m128i idx = _mm256_cvttpd_epi32(fl);
    const __m256d lo = _mm256_i32gather_pd(values, idx, 8);
    const __m256d hi = _mm256_i32gather_pd(values + 1, idx, 8);
    _mm256_storeu_pd(out + i, _mm256_add_pd(lo, _mm256_mul_pd(frac, _mm256_sub_pd(hi, lo))));
  }
  for (; i < n; ++i) {
    double x = std::max(std::min(xs[i], 1.0), 0.0);
    double pos = x * md;
    const double r = std::nearbyint(pos);
    if (std::fabs(pos - r) <= detail::kSnapTolerance) pos = r;
    const double fl = std::min(std::floor(pos), last);
    const double frac = pos - fl;
    const auto k = static_cast<std::size_t>(fl);
    out[i] = values[k] + frac * (values[k + 1] - values[k]);
  }
}

void blend_avx2(const double* a, const double* b, double w, double* out,
                std::size_t n) {
  const __m256d vw = _mm256_set1_pd(w);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d va = _mm256_loadu_pd(a + i);
    const __m256d vb = _mm256_loadu_pd(b + i);
    _mm256_storeu_pd(out + i, _mm256_add_pd(va, _mm256_mul_pd(vw, _mm256_sub_pd(vb, va))));
  }
  for (; i < n; ++i) out[i] = a[i] + w * (b[i] - a[i]);
}

void accumulate_avx2(const double* x, double* acc, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(acc + i, _mm256_add_pd(_mm256_loadu_pd(acc + i), _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) acc[i] += x[i];
}

void scale_avx2(double* x, double w, std::size_t n) {
  const __m256d vw = _mm256_set1_pd(w);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(x + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), vw));
  }
  for (; i < n; ++i) x[i] *= w;
}

// Lane l of the accumulator holds the partial sum of terms i = 4q + l; the
// n % 4 tail terms land in lanes 0.. in order. Matches lane_sum() in the
// scalar reference.
template <typename VecTerm, typename ScalarTerm>
double lane_sum_avx2(std::size_t n, VecTerm vterm, ScalarTerm sterm) {
  __m256d acc = _mm256_setzero_pd();
  const std::size_t body = n - n % 4;
  for (std::size_t i = 0; i < body; i += 4) acc = _mm256_add_pd(acc, vterm(i));
  alignas(32) double s[4];
  _mm256_store_pd(s, acc);
  for (std::size_t i = body; i < n; ++i) s[i - body] += sterm(i);
  return (s[0] + s[1]) + (s[2] + s[3]);
}

double sum_sq_diff_avx2(const double* a, const double* b, std::size_t n) {
  return lane_sum_avx2(
      n,
      [&](std::size_t i) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        return _mm256_mul_pd(d, d);
      },
      [&](std::size_t i) {
        const double d = a[i] - b[i];
        return d * d;
      });
}

double sum_abs_diff_avx2(const double* a, const double* b, std::size_t n) {
  return lane_sum_avx2(
      n,
      [&](std::size_t i) {
        return abs_pd(_mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
      },
      [&](std::size_t i) { return std::fabs(a[i] - b[i]); });
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  return lane_sum_avx2(
      n,
      [&](std::size_t i) { return _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)); },
      [&](std::size_t i) { return a[i] * b[i]; });
}

}  // namespace

namespace detail {

const Table& avx2_table_impl() {
  static const Table table{"avx2",          interp_avx2,       blend_avx2,
                           accumulate_avx2, scale_avx2,        sum_sq_diff_avx2,
                           sum_abs_diff_avx2, dot_avx2};
  return table;
}

}  // namespace detail
}  // namespace war::kernels
