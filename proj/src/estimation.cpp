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

#include "war/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "war/error.hpp"
#include "war/kernels.hpp"
#include "war/parallel.hpp"
#include "war/transport.hpp"

namespace war {
namespace {

using Grid = std::vector<double>;

// Objective differences below this are treated as a flat profile.
constexpr double kFlatTolerance = 1e-10;
// Scan values within this of the best are ties; the smaller |alpha| wins.
constexpr double kTieTolerance = 1e-12;
constexpr double kIllConditionedSlope = 1e-6;

void pin(Grid& v) {
  v.front() = 0.0;
  v.back() = 1.0;
}

// Trapezoid integral of the product a * b on the unit grid.
double trapezoid_dot(const Grid& a, const Grid& b) {
  const std::size_t n = a.size();
  const double h = 1.0 / static_cast<double>(n - 1);
  const double total = kernels::active().dot(a.data(), b.data(), n);
  return h * (total - 0.5 * (a[0] * b[0] + a[n - 1] * b[n - 1]));
}

// Series plus the lazily built inverses T_0^{-1}..T_{N-1}^{-1}, which the
// negative branch of the contraction needs.
class Context {
 public:
  explicit Context(const MapSeries& series) : series_(series) {
    series.validate();
    if (series.size() < 2) throw InputError("estimation needs a series of at least two maps");
    m_ = series.grid_size();
    const UnitMap id = UnitMap::identity(m_);
    nodes_.assign(id.values().begin(), id.values().end());
    constant_ = std::all_of(series.maps.begin() + 1, series.maps.end(),
                            [&](const UnitMap& t) { return t == series.maps.front(); });
  }

  // Every map of the series is the same; the objective is flat in alpha.
  [[nodiscard]] bool constant() const { return constant_; }

  [[nodiscard]] std::size_t n() const { return series_.size() - 1; }
  [[nodiscard]] std::size_t m() const { return m_; }
  [[nodiscard]] const Grid& nodes() const { return nodes_; }
  [[nodiscard]] const UnitMap& map(std::size_t i) const { return series_.maps[i]; }

  void prepare_inverses() {
    if (!inverses_.empty()) return;
    inverses_.resize(n());
    for (std::size_t i = 0; i < n(); ++i) {
      const UnitMap inv = invert(series_.maps[i]);
      inverses_[i].assign(inv.values().begin(), inv.values().end());
    }
  }

  [[nodiscard]] const double* inverse(std::size_t i) const { return inverses_[i].data(); }

  // Values of the map the contraction of T_i blends towards.
  [[nodiscard]] const double* target(std::size_t i, double alpha) const {
    return alpha > 0.0 ? series_.maps[i].data() : inverses_[i].data();
  }

  // [alpha T_i] on the grid. |alpha| = 1 returns the target unchanged.
  void contracted(std::size_t i, double alpha, Grid& out) const {
    if (alpha == 0.0) {
      out = nodes_;
      return;
    }
    const double* t = target(i, alpha);
    if (std::fabs(alpha) == 1.0) {
      out.assign(t, t + m_ + 1);
      return;
    }
    kernels::active().blend(nodes_.data(), t, std::fabs(alpha), out.data(), m_ + 1);
    pin(out);
  }

 private:
  const MapSeries& series_;
  std::size_t m_ = 0;
  Grid nodes_;
  std::vector<Grid> inverses_;
  bool constant_ = false;
};

// Raw S_alpha on the grid.
Grid ergodic_values(const Context& ctx, double alpha) {
  if (alpha == 0.0 && ctx.constant()) return {ctx.map(0).values().begin(), ctx.map(0).values().end()};
  const std::size_t size = ctx.m() + 1;
  const auto& k = kernels::active();
  Grid acc(size, 0.0), c(size), d(size), u(size);
  for (std::size_t i = 1; i <= ctx.n(); ++i) {
    ctx.contracted(i - 1, alpha, c);
    detail::invert_values(c.data(), ctx.m(), d.data());
    k.interp(ctx.map(i).data(), ctx.m(), d.data(), u.data(), size);
    pin(u);
    k.accumulate(u.data(), acc.data(), size);
  }
  k.scale(acc.data(), 1.0 / static_cast<double>(ctx.n()), size);
  pin(acc);
  return acc;
}

double objective_impl(const Context& ctx, double alpha,
                      const std::vector<QuantileCurve>* curves = nullptr) {
  const std::size_t size = ctx.m() + 1;
  const auto& k = kernels::active();
  const Grid s = ergodic_values(ctx, alpha);
  Grid c(size), pred(size), pushed(size);
  double total = 0.0;
  for (std::size_t i = 1; i <= ctx.n(); ++i) {
    const Grid* prediction = &s;  // S o [0 T] = S
    if (alpha != 0.0) {
      ctx.contracted(i - 1, alpha, c);
      k.interp(s.data(), ctx.m(), c.data(), pred.data(), size);
      pin(pred);
      prediction = &pred;
    }
    if (curves == nullptr) {
      total += trapezoid_sq_diff(*prediction, ctx.map(i).values());
    } else {
      const UnitMap& prev = (*curves)[i - 1].unit();
      k.interp(prediction->data(), ctx.m(), prev.data(), pushed.data(), size);
      pin(pushed);
      total += trapezoid_sq_diff(pushed, (*curves)[i].unit().values());
    }
  }
  return total / static_cast<double>(ctx.n());
}

// Node slopes for the central rule: central differences inside, one-sided at
// the two ends.
Grid central_node_slopes(const double* f, std::size_t m) {
  const auto md = static_cast<double>(m);
  Grid g(m + 1);
  g[0] = md * (f[1] - f[0]);
  g[m] = md * (f[m] - f[m - 1]);
  for (std::size_t j = 1; j < m; ++j) g[j] = 0.5 * md * (f[j + 1] - f[j - 1]);
  return g;
}

// Slope of f at the points xs under the chosen rule.
void slopes_at(const double* f, std::size_t m, const Grid& xs, SlopeRule rule, Grid& out) {
  const auto md = static_cast<double>(m);
  if (rule == SlopeRule::Central) {
    const Grid g = central_node_slopes(f, m);
    kernels::active().interp(g.data(), m, xs.data(), out.data(), xs.size());
    return;
  }
  for (std::size_t q = 0; q < xs.size(); ++q) {
    double pos = std::clamp(xs[q], 0.0, 1.0) * md;
    const double r = std::nearbyint(pos);
    if (std::fabs(pos - r) <= 1e-9) pos = r;
    const auto j = static_cast<std::size_t>(std::min(std::floor(pos), md - 1.0));
    out[q] = md * (f[j + 1] - f[j]);
  }
}

double derivative_impl(const Context& ctx, double alpha, SlopeRule rule) {
  const std::size_t m = ctx.m();
  const std::size_t size = m + 1;
  const auto md = static_cast<double>(m);
  const auto& k = kernels::active();
  const Grid& x = ctx.nodes();
  const bool positive = alpha > 0.0;

  // e_i = d[alpha T_i]/d alpha on the grid.
  auto fill_e = [&](std::size_t i, Grid& e) {
    const double* t = ctx.target(i, alpha);
    for (std::size_t q = 0; q < size; ++q) e[q] = positive ? t[q] - x[q] : x[q] - t[q];
  };

  Grid s(size, 0.0), ds(size, 0.0);
  Grid c(size), e(size), d(size), off(size), u(size), du(size), slope(size), tslope(size);
  std::vector<std::size_t> seg(size);

  for (std::size_t i = 1; i <= ctx.n(); ++i) {
    ctx.contracted(i - 1, alpha, c);
    fill_e(i - 1, e);
    detail::invert_values(c.data(), m, d.data(), seg.data(), off.data());
    // Slope of the contracted map at its preimage points d.
    if (rule == SlopeRule::Segment) {
      for (std::size_t q = 0; q < size; ++q) slope[q] = md * (c[seg[q] + 1] - c[seg[q]]);
    } else {
      slopes_at(ctx.target(i - 1, alpha), m, d, rule, tslope);
      for (std::size_t q = 0; q < size; ++q) slope[q] = 1.0 + std::fabs(alpha) * (tslope[q] - 1.0);
    }
    k.interp(ctx.map(i).data(), m, d.data(), u.data(), size);
    pin(u);
    slopes_at(ctx.map(i).data(), m, d, rule, tslope);
    du[0] = 0.0;
    du[m] = 0.0;
    for (std::size_t q = 1; q < m; ++q) {
      const std::size_t j = seg[q];
      const double dc_dalpha = e[j] + off[q] * (e[j + 1] - e[j]);
      const double dd_dalpha = -dc_dalpha / slope[q];
      du[q] = tslope[q] * dd_dalpha;
    }
    k.accumulate(u.data(), s.data(), size);
    k.accumulate(du.data(), ds.data(), size);
  }
  const double inv_n = 1.0 / static_cast<double>(ctx.n());
  k.scale(s.data(), inv_n, size);
  k.scale(ds.data(), inv_n, size);
  pin(s);

  Grid pred(size), resid(size), dresid(size), ds_at(size);
  double total = 0.0;
  for (std::size_t i = 1; i <= ctx.n(); ++i) {
    ctx.contracted(i - 1, alpha, c);
    fill_e(i - 1, e);
    k.interp(s.data(), m, c.data(), pred.data(), size);
    pin(pred);
    k.interp(ds.data(), m, c.data(), ds_at.data(), size);
    slopes_at(s.data(), m, c, rule, slope);
    const double* t = ctx.map(i).data();
    for (std::size_t q = 0; q < size; ++q) {
      resid[q] = pred[q] - t[q];
      dresid[q] = ds_at[q] + slope[q] * e[q];
    }
    dresid[0] = 0.0;
    dresid[m] = 0.0;
    total += 2.0 * trapezoid_dot(resid, dresid);
  }
  return total * inv_n;
}

double contract_about_impl(const Context& ctx, const Grid& s, double alpha) {
  const std::size_t size = ctx.m() + 1;
  Grid c(size);
  double total = 0.0;
  for (std::size_t i = 1; i <= ctx.n(); ++i) {
    const Grid* pred = &s;
    if (alpha != 0.0) {
      kernels::active().blend(s.data(), ctx.target(i - 1, alpha), std::fabs(alpha), c.data(), size);
      pin(c);
      pred = &c;
    }
    total += trapezoid_sq_diff(*pred, ctx.map(i).values());
  }
  return total / static_cast<double>(ctx.n());
}

struct ScanOutcome {
  double alpha = 0.0;
  double value = 0.0;
  std::vector<std::pair<double, double>> profile;
  bool flat = false;
};

std::vector<double> scan_points(const FitConfig& cfg, bool unit_endpoints) {
  std::vector<double> pts;
  const auto first = static_cast<long>(std::ceil(cfg.alpha_lo / cfg.alpha_grid_step - 1e-9));
  const auto last = static_cast<long>(std::floor(cfg.alpha_hi / cfg.alpha_grid_step + 1e-9));
  for (long k = first; k <= last; ++k) {
    const double a = static_cast<double>(k) * cfg.alpha_grid_step;
    if (a >= cfg.alpha_lo && a <= cfg.alpha_hi) pts.push_back(a);
  }
  pts.push_back(cfg.alpha_lo);
  pts.push_back(cfg.alpha_hi);
  if (unit_endpoints) {
    pts.push_back(-1.0);
    pts.push_back(1.0);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](double a, double b) { return std::fabs(a - b) < 1e-12; }),
            pts.end());
  return pts;
}

bool better(double value, double alpha, double best_value, double best_alpha) {
  if (value < best_value - kTieTolerance) return true;
  if (value <= best_value + kTieTolerance && std::fabs(alpha) < std::fabs(best_alpha)) return true;
  return false;
}

template <typename Objective>
ScanOutcome scan_and_refine(const FitConfig& cfg, bool unit_endpoints, Objective&& f) {
  ScanOutcome out;
  const std::vector<double> pts = scan_points(cfg, unit_endpoints);
  std::vector<double> values(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) { values[i] = f(pts[i]); });

  double best_alpha = pts.front();
  double best_value = values.front();
  double worst = values.front();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    out.profile.emplace_back(pts[i], values[i]);
    worst = std::max(worst, values[i]);
    if (better(values[i], pts[i], best_value, best_alpha)) {
      best_value = values[i];
      best_alpha = pts[i];
    }
  }
  const double lowest = *std::min_element(values.begin(), values.end());
  if (worst - lowest <= kFlatTolerance) {
    out.flat = true;
    out.alpha = 0.0;
    out.value = f(0.0);
    return out;
  }

  if (std::fabs(best_alpha) < 1.0) {
    // Golden-section search inside the bracket around the best scan point.
    double a = std::max(cfg.alpha_lo, best_alpha - cfg.alpha_grid_step);
    double b = std::min(cfg.alpha_hi, best_alpha + cfg.alpha_grid_step);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > cfg.refine_tol) {
      if (f1 <= f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - inv_phi * (b - a);
        f1 = f(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + inv_phi * (b - a);
        f2 = f(x2);
      }
    }
    const double mid = 0.5 * (a + b);
    const double fmid = f(mid);
    for (const auto& [alpha, value] : {std::pair{x1, f1}, std::pair{x2, f2}, std::pair{mid, fmid}}) {
      if (value < best_value) {
        best_value = value;
        best_alpha = alpha;
      }
    }
  }
  out.alpha = best_alpha;
  out.value = best_value;
  return out;
}

void finish_profile(std::vector<std::pair<double, double>>& profile, double alpha, double value) {
  const bool present = std::any_of(profile.begin(), profile.end(),
                                   [&](const auto& p) { return p.first == alpha; });
  if (!present) profile.emplace_back(alpha, value);
  std::sort(profile.begin(), profile.end());
}

double min_contracted_slope(const Context& ctx, double alpha) {
  Grid c(ctx.m() + 1);
  double worst = std::numeric_limits<double>::infinity();
  const auto md = static_cast<double>(ctx.m());
  for (std::size_t i = 0; i < ctx.n(); ++i) {
    ctx.contracted(i, alpha, c);
    for (std::size_t q = 0; q < ctx.m(); ++q) worst = std::min(worst, md * (c[q + 1] - c[q]));
  }
  return worst;
}

}  // namespace

void FitConfig::validate() const {
  if (!(alpha_grid_step > 0.0 && alpha_grid_step < 1.0)) {
    throw ConfigError("alpha grid step must lie in (0, 1)");
  }
  if (!(refine_tol > 0.0)) throw ConfigError("refine tolerance must be positive");
  if (!(alpha_lo < alpha_hi && alpha_lo >= -1.0 && alpha_hi <= 1.0)) {
    throw ConfigError("alpha bounds must satisfy -1 <= lo < hi <= 1");
  }
}

UnitMap ergodic_s(const MapSeries& series, double alpha) {
  if (!(std::fabs(alpha) <= 1.0)) throw DomainError("ergodic_s: |alpha| must be <= 1");
  Context ctx(series);
  if (alpha < 0.0) ctx.prepare_inverses();
  return detail::finish_map(ergodic_values(ctx, alpha), "ergodic S");
}

double objective(const MapSeries& series, double alpha) {
  if (!(std::fabs(alpha) <= 1.0)) throw DomainError("objective: |alpha| must be <= 1");
  Context ctx(series);
  if (alpha < 0.0) ctx.prepare_inverses();
  return objective_impl(ctx, alpha);
}

double objective_pushforward(const MapSeries& series, const std::vector<QuantileCurve>& curves,
                             double alpha) {
  if (!(std::fabs(alpha) <= 1.0)) throw DomainError("objective: |alpha| must be <= 1");
  if (curves.size() != series.size()) {
    throw InputError("pushforward objective needs one curve per map");
  }
  for (const auto& q : curves) {
    if (q.unit().grid_size() != series.grid_size()) throw InputError("curves and maps use different grids");
  }
  Context ctx(series);
  if (alpha < 0.0) ctx.prepare_inverses();
  return objective_impl(ctx, alpha, &curves);
}

double objective_derivative(const MapSeries& series, double alpha, SlopeRule rule) {
  if (alpha == 0.0) throw DomainError("objective derivative is not defined at alpha = 0");
  if (!(std::fabs(alpha) < 1.0)) throw DomainError("objective derivative needs |alpha| < 1");
  Context ctx(series);
  if (alpha < 0.0) ctx.prepare_inverses();
  return derivative_impl(ctx, alpha, rule);
}

FitResult fit(const MapSeries& series, const FitConfig& cfg) {
  cfg.validate();
  Context ctx(series);
  ctx.prepare_inverses();
  ScanOutcome scan = scan_and_refine(cfg, cfg.score_unit_endpoints,
                                     [&](double a) { return objective_impl(ctx, a); });
  if (ctx.constant()) {
    // Interpolation noise aside, every alpha fits a constant series.
    scan.flat = true;
    scan.alpha = 0.0;
    scan.value = objective_impl(ctx, 0.0);
  }
  FitResult r;
  r.system = SystemKind::PerturbThenMap;
  r.alpha_hat = scan.alpha;
  r.objective_at_opt = scan.value;
  r.flat_objective = scan.flat;
  r.objective_profile = scan.profile;
  finish_profile(r.objective_profile, r.alpha_hat, r.objective_at_opt);
  r.n_used = ctx.n();
  r.s_hat = detail::finish_map(ergodic_values(ctx, r.alpha_hat), "ergodic S");
  if (r.alpha_hat != 0.0 && std::fabs(r.alpha_hat) < 1.0) {
    r.derivative_at_opt = derivative_impl(ctx, r.alpha_hat, cfg.slope_rule);
  }
  r.min_contracted_slope = min_contracted_slope(ctx, r.alpha_hat);
  r.ill_conditioned = r.min_contracted_slope < kIllConditionedSlope;
  return r;
}

double objective_contract_about(const MapSeries& series, const UnitMap& s, double alpha) {
  if (!(std::fabs(alpha) < 1.0)) throw DomainError("contract-about objective needs |alpha| < 1");
  Context ctx(series);
  if (s.grid_size() != ctx.m()) throw InputError("S and the series use different grids");
  if (alpha < 0.0) ctx.prepare_inverses();
  return contract_about_impl(ctx, Grid(s.values().begin(), s.values().end()), alpha);
}

FitResult fit_alt(const MapSeries& series, const FitConfig& cfg) {
  cfg.validate();
  Context ctx(series);
  ctx.prepare_inverses();
  const std::vector<UnitMap> tail(series.maps.begin() + 1, series.maps.end());
  const UnitMap s_n = ctx.constant() ? series.maps.front() : mean_map(tail);
  const Grid s(s_n.values().begin(), s_n.values().end());

  FitConfig inner = cfg;
  inner.alpha_lo = std::max(cfg.alpha_lo, -0.999);
  inner.alpha_hi = std::min(cfg.alpha_hi, 0.999);
  ScanOutcome scan =
      scan_and_refine(inner, false, [&](double a) { return contract_about_impl(ctx, s, a); });
  if (ctx.constant()) {
    scan.flat = true;
    scan.alpha = 0.0;
    scan.value = contract_about_impl(ctx, s, 0.0);
  }

  FitResult r;
  r.system = SystemKind::ContractAbout;
  r.alpha_hat = scan.alpha;
  r.objective_at_opt = scan.value;
  r.flat_objective = scan.flat;
  r.objective_profile = scan.profile;
  finish_profile(r.objective_profile, r.alpha_hat, r.objective_at_opt);
  r.n_used = ctx.n();
  r.s_hat = s_n;
  r.min_contracted_slope = min_slope(s_n);
  r.ill_conditioned = r.min_contracted_slope < kIllConditionedSlope;
  return r;
}

}  // namespace war
