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

#include "war/transport.hpp"

#include <algorithm>
#include <cmath>

#include "war/error.hpp"
#include "war/kernels.hpp"

namespace war {
namespace {

void require_same_grid(const UnitMap& a, const UnitMap& b) {
  if (a.grid_size() != b.grid_size()) throw DomainError("maps live on different grids");
}

std::vector<double> grid_nodes(std::size_t m) {
  const auto id = UnitMap::identity(m);
  return {id.values().begin(), id.values().end()};
}

// Exact grid identity. Usually decided at the first interior node.
bool is_identity(const UnitMap& f) {
  const auto md = static_cast<double>(f.grid_size());
  const auto v = f.values();
  for (std::size_t k = 1; k + 1 < v.size(); ++k) {
    if (v[k] != static_cast<double>(k) / md) return false;
  }
  return true;
}

}  // namespace

double evaluate(const UnitMap& m, double x) { return m(x); }

UnitMap compose(const UnitMap& f, const UnitMap& g) {
  require_same_grid(f, g);
  // Composing with the identity is exact; interpolation would round.
  if (is_identity(f)) return g;
  if (is_identity(g)) return f;
  std::vector<double> out(g.values().size());
  kernels::active().interp(f.data(), f.grid_size(), g.data(), out.data(), out.size());
  return detail::finish_map(std::move(out), "compose");
}

namespace detail {

void invert_values(const double* v, std::size_t n, double* out, std::size_t* segment,
                   double* offset) {
  const auto nd = static_cast<double>(n);
  out[0] = 0.0;
  out[n] = 1.0;
  if (segment != nullptr) {
    segment[0] = 0;
    segment[n] = n - 1;
    offset[0] = 0.0;
    offset[n] = 1.0;
  }
  // Merge walk: segment j holds v[j] <= y < v[j+1].
  std::size_t j = 0;
  for (std::size_t k = 1; k < n; ++k) {
    const double y = static_cast<double>(k) / nd;
    while (j + 1 < n && v[j + 1] <= y) ++j;
    const double frac = (y - v[j]) / (v[j + 1] - v[j]);
    out[k] = (static_cast<double>(j) + frac) / nd;
    if (segment != nullptr) {
      segment[k] = j;
      offset[k] = frac;
    }
  }
}

}  // namespace detail

UnitMap invert(const UnitMap& m) {
  std::vector<double> out(m.values().size());
  detail::invert_values(m.data(), m.grid_size(), out.data());
  return detail::finish_map(std::move(out), "invert");
}

UnitMap contract(double alpha, const UnitMap& t) {
  if (!(std::fabs(alpha) <= 1.0)) throw DomainError("contract: |alpha| must be <= 1");
  if (alpha < 0.0) return contract(alpha, t, invert(t));
  return contract(alpha, t, t);
}

UnitMap contract(double alpha, const UnitMap& t, const UnitMap& t_inverse) {
  if (!(std::fabs(alpha) <= 1.0)) throw DomainError("contract: |alpha| must be <= 1");
  require_same_grid(t, t_inverse);
  if (alpha == 0.0) return UnitMap::identity(t.grid_size());
  if (alpha == 1.0) return t;
  if (alpha == -1.0) return t_inverse;
  const auto id = grid_nodes(t.grid_size());
  std::vector<double> out(id.size());
  // x + a (x - t^{-1}(x)) == x + |a| (t^{-1}(x) - x)
  const UnitMap& target = alpha > 0.0 ? t : t_inverse;
  kernels::active().blend(id.data(), target.data(), std::fabs(alpha), out.data(), out.size());
  return detail::finish_map(std::move(out), "contract");
}

UnitMap contract_about(double alpha, const UnitMap& t, const UnitMap& s) {
  if (!(std::fabs(alpha) < 1.0)) throw DomainError("contract_about: |alpha| must be < 1");
  if (alpha < 0.0) return contract_about(alpha, t, s, invert(t));
  return contract_about(alpha, t, s, t);
}

UnitMap contract_about(double alpha, const UnitMap& t, const UnitMap& s,
                       const UnitMap& t_inverse) {
  if (!(std::fabs(alpha) < 1.0)) throw DomainError("contract_about: |alpha| must be < 1");
  require_same_grid(t, s);
  require_same_grid(t, t_inverse);
  if (alpha == 0.0) return s;
  std::vector<double> out(s.values().size());
  const UnitMap& target = alpha > 0.0 ? t : t_inverse;
  kernels::active().blend(s.data(), target.data(), std::fabs(alpha), out.data(), out.size());
  return detail::finish_map(std::move(out), "contract_about");
}

double trapezoid_sq_diff(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  const double h = 1.0 / static_cast<double>(n - 1);
  const double total = kernels::active().sum_sq_diff(a.data(), b.data(), n);
  const double d0 = a[0] - b[0];
  const double d1 = a[n - 1] - b[n - 1];
  return h * (total - 0.5 * (d0 * d0 + d1 * d1));
}

double lp_distance(const UnitMap& f, const UnitMap& g, double p) {
  if (!(p >= 1.0)) throw DomainError("lp_distance: p must be >= 1");
  require_same_grid(f, g);
  const std::size_t n = f.values().size();
  const double h = 1.0 / static_cast<double>(f.grid_size());
  const double* a = f.data();
  const double* b = g.data();
  if (p == 1.0) {
    const double total = kernels::active().sum_abs_diff(a, b, n);
    return h * (total - 0.5 * (std::fabs(a[0] - b[0]) + std::fabs(a[n - 1] - b[n - 1])));
  }
  if (p == 2.0) return std::sqrt(std::max(0.0, trapezoid_sq_diff(f.values(), g.values())));
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double w = (k == 0 || k + 1 == n) ? 0.5 : 1.0;
    total += w * std::pow(std::fabs(a[k] - b[k]), p);
  }
  return std::pow(h * total, 1.0 / p);
}

double sup_distance(const UnitMap& f, const UnitMap& g) {
  require_same_grid(f, g);
  double worst = 0.0;
  for (std::size_t k = 0; k < f.values().size(); ++k) {
    worst = std::max(worst, std::fabs(f[k] - g[k]));
  }
  return worst;
}

double wasserstein(const QuantileCurve& q1, const QuantileCurve& q2) {
  if (!(q1.domain() == q2.domain())) throw DomainError("wasserstein: curves on different domains");
  return q1.domain().width() * lp_distance(q1.unit(), q2.unit(), 2.0);
}

UnitMap mean_map(std::span<const UnitMap> maps) {
  if (maps.empty()) throw InputError("mean of an empty list of maps");
  const auto& k = kernels::active();
  std::vector<double> acc(maps.front().values().size(), 0.0);
  for (const auto& m : maps) {
    require_same_grid(m, maps.front());
    k.accumulate(m.data(), acc.data(), acc.size());
  }
  k.scale(acc.data(), 1.0 / static_cast<double>(maps.size()), acc.size());
  return detail::finish_map(std::move(acc), "mean_map");
}

double max_slope(const UnitMap& m) {
  double best = 0.0;
  for (std::size_t k = 0; k < m.grid_size(); ++k) best = std::max(best, m[k + 1] - m[k]);
  return best * static_cast<double>(m.grid_size());
}

double min_slope(const UnitMap& m) {
  double best = 1.0;
  for (std::size_t k = 0; k < m.grid_size(); ++k) best = std::min(best, m[k + 1] - m[k]);
  return best * static_cast<double>(m.grid_size());
}

}  // namespace war
