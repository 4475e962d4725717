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

#include "war/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>

#include "war/error.hpp"
#include "war/parallel.hpp"
#include "war/transport.hpp"

namespace war {
namespace {

// Type-7 quantile of an unsorted sample.
double quantile(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  const double h = p * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= v.size()) return v.back();
  return v[lo] + (h - static_cast<double>(lo)) * (v[lo + 1] - v[lo]);
}

double rmse_about(const std::vector<double>& xs, double center) {
  double acc = 0.0;
  for (double x : xs) acc += (x - center) * (x - center);
  return std::sqrt(acc / static_cast<double>(xs.size()));
}

double mean(const std::vector<double>& xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

FitResult fit_system(const MapSeries& series, SystemKind system, const FitConfig& cfg) {
  return system == SystemKind::PerturbThenMap ? fit(series, cfg) : fit_alt(series, cfg);
}

// Slope of log(y) on log(n) with a bootstrap band that resamples the
// replicates within each n.
SlopeEstimate log_log_slope(const std::vector<std::size_t>& ns,
                            const std::vector<std::vector<double>>& samples,
                            double (*summary)(const std::vector<double>&), std::size_t n_boot,
                            Rng rng) {
  SlopeEstimate out;
  std::vector<double> lx, ly;
  for (std::size_t j = 0; j < ns.size(); ++j) {
    const double y = summary(samples[j]);
    if (!(y > 0.0)) return out;
    lx.push_back(std::log(static_cast<double>(ns[j])));
    ly.push_back(std::log(y));
  }
  out.slope = least_squares_slope(lx, ly);
  std::vector<double> boot;
  std::vector<double> draw;
  for (std::size_t b = 0; b < n_boot; ++b) {
    std::vector<double> by;
    for (const auto& s : samples) {
      draw.resize(s.size());
      for (double& d : draw) d = s[rng.below(s.size())];
      by.push_back(std::log(std::max(summary(draw), 1e-300)));
    }
    boot.push_back(least_squares_slope(lx, by));
  }
  if (!boot.empty()) {
    out.band_lo = quantile(boot, 0.025);
    out.band_hi = quantile(boot, 0.975);
  }
  return out;
}

double root_mean_square(const std::vector<double>& xs) { return rmse_about(xs, 0.0); }

// Slopes drawn piecewise constant on a random partition, then blended
// towards one band edge so that they average exactly one.
std::vector<double> band_slopes(Rng& rng, double lo, double hi, std::size_t m) {
  const std::size_t pieces = 1 + rng.below(20);
  std::vector<double> s(m);
  std::vector<std::size_t> cuts{0, m};
  for (std::size_t p = 1; p < pieces; ++p) cuts.push_back(rng.below(m));
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    const double v = lo + (hi - lo) * rng.uniform();
    for (std::size_t k = cuts[p]; k < cuts[p + 1]; ++k) s[k] = v;
  }
  const double avg = mean(s);
  const double edge = avg > 1.0 ? lo : hi;
  const double t = (1.0 - edge) / (avg - edge);
  for (double& v : s) v = edge + t * (v - edge);
  return s;
}

UnitMap from_slopes(const std::vector<double>& s) {
  const std::size_t m = s.size();
  std::vector<double> v(m + 1, 0.0);
  for (std::size_t k = 0; k < m; ++k) v[k + 1] = v[k] + s[k] / static_cast<double>(m);
  // Rescale the rounding drift away so the last value is exactly one.
  const double top = v[m];
  for (double& x : v) x /= top;
  v[m] = 1.0;
  return UnitMap::from_values(std::move(v));
}

// Map with arbitrary (possibly extreme) slopes: normalized cumulative sums of
// exponential increments, sometimes raised to a power for extra skew.
UnitMap random_free_map(Rng& rng, std::size_t m) {
  std::vector<double> s(m);
  const double power = 1.0 + 3.0 * rng.uniform();
  const std::size_t pieces = 1 + rng.below(50);
  std::vector<std::size_t> cuts{0, m};
  for (std::size_t p = 1; p < pieces; ++p) cuts.push_back(rng.below(m));
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    // The floor keeps consecutive grid values distinct in double precision.
    const double v = std::max(std::pow(-std::log(1.0 - rng.uniform()), power), 1e-8);
    for (std::size_t k = cuts[p]; k < cuts[p + 1]; ++k) s[k] = v;
  }
  const double avg = mean(s);
  for (double& v : s) v /= avg;
  return from_slopes(s);
}

}  // namespace

Seed replicate_seed(Seed run, std::uint64_t cell, std::uint64_t rep) {
  return Seed{Rng(run).substream(cell).substream(rep).key()};
}

void GridSpec::validate() const {
  if (alphas.empty()) throw ConfigError("grid needs at least one alpha");
  if (s_choices.empty()) throw ConfigError("grid needs at least one S");
  if (replicates < 1) throw ConfigError("grid needs replicates >= 1");
  if (burn_in + 2 > n_steps) throw ConfigError("grid chains need n_steps >= burn_in + 2");
  noise.validate();
  fit.validate();
  for (const auto& [name, s] : s_choices) {
    for (double a : alphas) ModelParams{a, s, system}.validate();
  }
}

ReplicateRecord run_replicate(const GridSpec& spec, std::size_t cell, std::size_t rep) {
  const std::size_t na = spec.alphas.size();
  const auto& [s_name, s] = spec.s_choices[cell / na];
  ReplicateRecord r;
  r.cell = cell;
  r.replicate = rep;
  r.alpha_true = spec.alphas[cell % na];
  r.s_name = s_name;
  try {
    const ModelParams params{r.alpha_true, s, spec.system};
    ChainConfig chain;
    chain.n_steps = spec.n_steps;
    chain.burn_in = spec.burn_in;
    chain.init = UnitMap::identity(s.grid_size());
    chain.seed = replicate_seed(spec.seed, cell, rep);
    const MapSeries series = simulate_chain(params, chain, spec.noise);
    const FitResult f = fit_system(series, spec.system, spec.fit);
    r.alpha_hat = f.alpha_hat;
    r.s_error = lp_distance(f.s_hat, s, 2.0);
    r.ok = true;
  } catch (const std::exception& e) {
    r.ok = false;
    r.error = e.what();
  }
  return r;
}

GridReport run_simulation_grid(const GridSpec& spec) {
  spec.validate();
  const std::size_t n_cells = spec.n_cells();
  GridReport report;
  report.replicates.resize(n_cells * spec.replicates);
  parallel_for(report.replicates.size(), [&](std::size_t t) {
    report.replicates[t] = run_replicate(spec, t / spec.replicates, t % spec.replicates);
  });

  const double l_eps = spec.system == SystemKind::PerturbThenMap ? lipschitz_bound(spec.noise) : 0.0;
  for (std::size_t c = 0; c < n_cells; ++c) {
    CellRecord cell;
    cell.alpha_true = spec.alphas[c % spec.alphas.size()];
    cell.s_name = spec.s_choices[c / spec.alphas.size()].first;
    std::vector<double> alphas, errors;
    for (std::size_t r = 0; r < spec.replicates; ++r) {
      const auto& rec = report.replicates[c * spec.replicates + r];
      if (rec.ok) {
        alphas.push_back(rec.alpha_hat);
        errors.push_back(rec.s_error);
      }
    }
    cell.n_ok = alphas.size();
    cell.n_failed = spec.replicates - cell.n_ok;
    if (!alphas.empty()) {
      cell.alpha_hat_median = quantile(alphas, 0.5);
      cell.alpha_hat_iqr = quantile(alphas, 0.75) - quantile(alphas, 0.25);
      cell.s_error_median = quantile(errors, 0.5);
      cell.s_error_iqr = quantile(errors, 0.75) - quantile(errors, 0.25);
    }
    if (spec.system == SystemKind::PerturbThenMap) {
      // Same computation as check_stationarity_condition, with the noise
      // bound shared across cells.
      StationarityReport st;
      st.l_s = max_slope(spec.s_choices[c / spec.alphas.size()].second);
      st.l_eps = l_eps;
      st.product = std::fabs(cell.alpha_true) * st.l_s * st.l_eps;
      st.r = std::sqrt(st.product);
      st.satisfied = st.product < 1.0;
      st.negative_alpha_caveat = cell.alpha_true < 0.0;
      cell.stationary = st.satisfied;
      cell.in_theory_region = st.in_theory_region();
      cell.stationarity = st;
    }
    report.cells.push_back(std::move(cell));
  }
  return report;
}

void RateSpec::validate() const {
  std::vector<std::size_t> sorted(ns);
  std::sort(sorted.begin(), sorted.end());
  if (std::unique(sorted.begin(), sorted.end()) - sorted.begin() < 3) {
    throw ConfigError("rate experiment needs at least three distinct N");
  }
  if (sorted.front() < 2) throw ConfigError("rate experiment needs N >= 2");
  if (replicates < 20) throw ConfigError("rate experiment needs replicates >= 20");
  params.validate();
  noise.validate();
  fit.validate();
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ConfigError("slope needs two or more points");
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (!(sxx > 0.0)) throw ConfigError("slope needs distinct x values");
  return sxy / sxx;
}

RateReport run_rate_experiment(const RateSpec& spec) {
  spec.validate();
  const std::size_t nn = spec.ns.size();
  const std::size_t reps = spec.replicates;
  std::vector<double> alpha_hats(nn * reps), s_errors(nn * reps);
  parallel_for(nn * reps, [&](std::size_t t) {
    const std::size_t j = t / reps;
    ChainConfig chain;
    chain.burn_in = spec.burn_in;
    chain.n_steps = spec.burn_in + spec.ns[j] + 1;
    chain.init = UnitMap::identity(spec.params.s.grid_size());
    chain.seed = replicate_seed(spec.seed, j, t % reps);
    const MapSeries series = simulate_chain(spec.params, chain, spec.noise);
    const FitResult f = fit_system(series, spec.params.system, spec.fit);
    alpha_hats[t] = f.alpha_hat;
    s_errors[t] = lp_distance(f.s_hat, spec.params.s, 2.0);
  });

  RateReport report;
  std::vector<std::vector<double>> alpha_dev(nn), s_err(nn);
  for (std::size_t j = 0; j < nn; ++j) {
    RatePoint p;
    p.n = spec.ns[j];
    p.alpha_hats.assign(alpha_hats.begin() + j * reps, alpha_hats.begin() + (j + 1) * reps);
    p.s_errors.assign(s_errors.begin() + j * reps, s_errors.begin() + (j + 1) * reps);
    p.alpha_rmse = rmse_about(p.alpha_hats, spec.params.alpha);
    p.s_error_mean = mean(p.s_errors);
    for (double a : p.alpha_hats) alpha_dev[j].push_back(a - spec.params.alpha);
    s_err[j] = p.s_errors;
    report.points.push_back(std::move(p));
  }
  const Rng boot(Rng(spec.seed).substream(nn));
  report.alpha_slope = log_log_slope(spec.ns, alpha_dev, root_mean_square, spec.bootstrap,
                                     boot.substream(0));
  report.s_slope = log_log_slope(spec.ns, s_err, mean, spec.bootstrap, boot.substream(1));
  report.undefined = !report.alpha_slope.slope || !report.s_slope.slope;
  return report;
}

UnitMap random_band_map(Rng& rng, double lo, double hi, std::size_t m) {
  if (!(lo > 0.0 && lo < 1.0 && hi > 1.0 && std::isfinite(hi))) {
    throw ConfigError("slope band must satisfy 0 < lo < 1 < hi");
  }
  return from_slopes(band_slopes(rng, lo, hi, m));
}

InverseSweepReport run_inverse_inequality_sweep(std::size_t n_pairs,
                                                std::pair<double, double> slope_band, Seed seed,
                                                std::size_t m) {
  const auto [lo, hi] = slope_band;
  if (!(lo > 0.0 && lo < hi && std::isfinite(hi))) {
    throw ConfigError("slope band must satisfy 0 < lo < hi < inf");
  }
  if (!(lo < 1.0 && hi > 1.0)) {
    throw ConfigError("no map of the unit interval has all slopes inside this band");
  }
  InverseSweepReport rep;
  rep.n_pairs = n_pairs;
  rep.slope_lo = lo;
  rep.slope_hi = hi;
  rep.bound_factor = hi / lo;
  rep.additive = 4.0 / static_cast<double>(m);

  struct PairResult {
    double ratio = 0.0;
    bool violation = false;
    double sqrt_ratio = 0.0;
  };
  std::vector<PairResult> results(n_pairs);
  const Rng root(seed);
  parallel_for(n_pairs, [&](std::size_t p) {
    Rng rng = root.substream(p);
    const UnitMap t = random_band_map(rng, lo, hi, m);
    const UnitMap s = random_band_map(rng, lo, hi, m);
    const double d = lp_distance(t, s, 2.0);
    const double di = lp_distance(invert(t), invert(s), 2.0);
    PairResult& r = results[p];
    if (d > 0.0) r.ratio = di / d;
    r.violation = di > rep.bound_factor * d + rep.additive;

    Rng free_rng = root.substream(n_pairs + p);
    const UnitMap u = random_free_map(free_rng, m);
    const UnitMap v = random_free_map(free_rng, m);
    const double du = lp_distance(u, v, 2.0);
    if (du > 0.0) r.sqrt_ratio = lp_distance(invert(u), invert(v), 2.0) / std::sqrt(du);
  });
  for (const auto& r : results) {
    rep.max_ratio = std::max(rep.max_ratio, r.ratio);
    rep.sqrt_constant = std::max(rep.sqrt_constant, r.sqrt_ratio);
    if (r.violation) ++rep.violations;
  }
  return rep;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::PreferUniformQuantile:
      return "prefer-uq";
    case Verdict::PreferIncrement:
      return "prefer-increment";
    case Verdict::Inconclusive:
      break;
  }
  return "inconclusive";
}

ComparisonReport compare_models(const EmpiricalSeries& series, const FitConfig& cfg) {
  series.validate();
  if (series.curves.size() < 3) throw InputError("model comparison needs at least three periods");
  ComparisonReport out;
  const MapSeries quantile_maps = maps_from_distributions(series.curves, ModelKind::uniform_quantile());
  const MapSeries increments = maps_from_distributions(series.curves, ModelKind::increment());

  out.increment_at_zero = objective_pushforward(increments, series.curves, 0.0);
  out.quantile_at_one = objective(quantile_maps, 1.0);
  const double scale = std::max(std::fabs(out.increment_at_zero), std::fabs(out.quantile_at_one));
  out.bridging_rel_error =
      scale > 0.0 ? std::fabs(out.increment_at_zero - out.quantile_at_one) / scale : 0.0;
  out.bridging_holds = out.bridging_rel_error <= 1e-8;

  // T_0 = id only anchors the increments; the fit uses T_1, T_2, ...
  MapSeries tail = increments;
  tail.maps.erase(tail.maps.begin());
  out.increment = fit(tail, cfg);
  out.quantile = fit(quantile_maps, cfg);

  const std::vector<QuantileCurve> tail_curves(series.curves.begin() + 1, series.curves.end());
  out.increment_prediction_error = objective_pushforward(tail, tail_curves, out.increment.alpha_hat);
  out.quantile_prediction_error = out.quantile.objective_at_opt;

  const bool inc_near_zero = std::fabs(out.increment.alpha_hat) <= kVerdictTolerance;
  const bool uq_near_one = out.quantile.alpha_hat >= 1.0 - kVerdictTolerance;
  const double gap = out.increment_prediction_error - out.quantile_prediction_error;
  const double size = std::max(out.increment_prediction_error, out.quantile_prediction_error);
  if (inc_near_zero && !uq_near_one) {
    out.verdict = Verdict::PreferUniformQuantile;
  } else if (uq_near_one && !inc_near_zero) {
    out.verdict = Verdict::PreferIncrement;
  } else if (std::fabs(gap) > 1e-9 * size) {
    out.verdict = gap > 0.0 ? Verdict::PreferUniformQuantile : Verdict::PreferIncrement;
  }
  return out;
}

}  // namespace war
