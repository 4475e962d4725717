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

// Experiment harnesses: simulation grid, convergence-rate study, inverse
// inequality sweep and the increment-versus-quantile model comparison.
//
// Every replicate draws from its own substream of the run seed, so reports
// are reproducible and independent of the number of threads.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "war/dynamics.hpp"
#include "war/estimation.hpp"
#include "war/ingest.hpp"
#include "war/noise.hpp"
#include "war/rng.hpp"

namespace war {

/// Seed of replicate `rep` in cell `cell`: substream(cell).substream(rep).
Seed replicate_seed(Seed run, std::uint64_t cell, std::uint64_t rep);

struct GridSpec {
  std::vector<double> alphas;
  std::vector<std::pair<std::string, UnitMap>> s_choices;
  std::size_t n_steps = 300;
  std::size_t burn_in = 100;
  std::size_t replicates = 20;
  NoiseSpec noise;
  SystemKind system = SystemKind::PerturbThenMap;
  FitConfig fit;
  Seed seed{};

  void validate() const;

  /// Cells ordered s-major: cell = s_index * alphas.size() + alpha_index.
  [[nodiscard]] std::size_t n_cells() const { return alphas.size() * s_choices.size(); }
};

struct ReplicateRecord {
  std::size_t cell = 0;
  std::size_t replicate = 0;
  double alpha_true = 0.0;
  std::string s_name;
  bool ok = false;
  double alpha_hat = 0.0;
  double s_error = 0.0;  // ||S_hat - S||_2
  std::string error;     // set when !ok
};

struct CellRecord {
  double alpha_true = 0.0;
  std::string s_name;
  std::size_t n_ok = 0;
  std::size_t n_failed = 0;
  double alpha_hat_median = 0.0;
  double alpha_hat_iqr = 0.0;
  double s_error_median = 0.0;
  double s_error_iqr = 0.0;
  // Empty for the contract-about system, where no sufficient condition is
  // implemented.
  std::optional<StationarityReport> stationarity;
  bool stationary = false;
  bool in_theory_region = false;
};

struct GridReport {
  std::vector<CellRecord> cells;
  std::vector<ReplicateRecord> replicates;  // cell-major, then replicate
};

GridReport run_simulation_grid(const GridSpec& spec);

/// Simulate and fit one replicate exactly as the grid does.
ReplicateRecord run_replicate(const GridSpec& spec, std::size_t cell, std::size_t rep);

struct RateSpec {
  std::vector<std::size_t> ns;  // numbers of transition pairs N
  std::size_t replicates = 50;
  ModelParams params;
  NoiseSpec noise;
  std::size_t burn_in = 100;
  FitConfig fit;
  std::size_t bootstrap = 200;
  Seed seed{};

  void validate() const;
};

struct RatePoint {
  std::size_t n = 0;
  double alpha_rmse = 0.0;
  double s_error_mean = 0.0;
  std::vector<double> alpha_hats;
  std::vector<double> s_errors;
};

struct SlopeEstimate {
  std::optional<double> slope;  // empty when a log is undefined
  double band_lo = 0.0;         // 2.5% bootstrap quantile
  double band_hi = 0.0;         // 97.5% bootstrap quantile
};

struct RateReport {
  std::vector<RatePoint> points;
  SlopeEstimate alpha_slope;
  SlopeEstimate s_slope;
  bool undefined = false;  // some error was zero, e.g. noiseless chains
};

RateReport run_rate_experiment(const RateSpec& spec);

/// Least-squares slope of y on x.
double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y);

struct InverseSweepReport {
  std::size_t n_pairs = 0;
  double slope_lo = 0.0;
  double slope_hi = 0.0;
  double bound_factor = 0.0;  // slope_hi / slope_lo
  double additive = 0.0;      // 4 / M
  // max ||T^-1 - S^-1||_2 / ||T - S||_2 over band pairs with T != S
  double max_ratio = 0.0;
  std::size_t violations = 0;
  // Calibrated C with ||T^-1 - S^-1||_2 <= C sqrt(||T - S||_2) over
  // unconstrained pairs; reported, not asserted.
  double sqrt_constant = 0.0;
};

/// Random map with every grid slope inside [lo, hi] (needs lo < 1 < hi).
UnitMap random_band_map(Rng& rng, double lo, double hi, std::size_t m = kDefaultGridSize);

InverseSweepReport run_inverse_inequality_sweep(std::size_t n_pairs,
                                                std::pair<double, double> slope_band, Seed seed,
                                                std::size_t m = kDefaultGridSize);

enum class Verdict { PreferUniformQuantile, PreferIncrement, Inconclusive };
std::string_view to_string(Verdict v);

struct ComparisonReport {
  FitResult increment;  // fitted on the increments T_i = q_i o q_{i-1}^{-1}, i >= 1
  FitResult quantile;   // fitted on the quantile curves themselves
  double increment_at_zero = 0.0;  // pushforward objective of the increment series at 0
  double quantile_at_one = 0.0;    // quantile objective at 1
  double bridging_rel_error = 0.0;
  bool bridging_holds = false;  // relative error <= 1e-8
  // Mean squared one-step Wasserstein prediction error of each fitted model,
  // on the unit scale of the domain. Comparable across the two models.
  double increment_prediction_error = 0.0;
  double quantile_prediction_error = 0.0;
  Verdict verdict = Verdict::Inconclusive;
};

/// Tolerance for the "alpha near 0" / "alpha near 1" readings of the verdict.
inline constexpr double kVerdictTolerance = 0.05;

/// Verdict: alpha_I near 0 (and alpha_UQ not near 1) means the increment fit
/// collapses onto a member of the quantile family, so prefer UQ; alpha_UQ
/// near 1 (and alpha_I not near 0) is the mirror case. Otherwise the model
/// with the smaller Wasserstein prediction error wins; a tie (relative
/// difference below 1e-9) is inconclusive.
ComparisonReport compare_models(const EmpiricalSeries& series, const FitConfig& cfg = {});

}  // namespace war
