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

// Least-squares estimation of (alpha, S).
//
// For the perturb-then-map system the map estimate is available in closed
// form for every alpha,
//
//   S_alpha = (1/N) sum_j T_j o [alpha T_{j-1}]^{-1},
//
// and alpha is the minimizer of the profiled residual
//
//   M(alpha) = (1/N) sum_i || S_alpha o [alpha T_{i-1}] - T_i ||_2^2.
//
// For the contract-about system S is the plain mean of the maps and alpha
// minimizes (1/N) sum_i || alpha[T_{i-1}, S] - T_i ||_2^2.

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "war/dynamics.hpp"
#include "war/unit_map.hpp"

namespace war {

/// Grid-slope estimate used inside the analytic objective derivative.
enum class SlopeRule {
  Central,  // central differences at grid nodes, one-sided at the ends
  Segment,  // slope of the interpolation segment containing the point
};

struct FitConfig {
  double alpha_grid_step = 0.01;
  double alpha_lo = -0.999;
  double alpha_hi = 0.999;
  double refine_tol = 1e-4;
  /// Also score alpha = -1 and alpha = 1 (perturb-then-map only).
  bool score_unit_endpoints = true;
  SlopeRule slope_rule = SlopeRule::Central;

  void validate() const;
};

struct FitResult {
  double alpha_hat = 0.0;
  UnitMap s_hat = UnitMap::identity();
  std::vector<std::pair<double, double>> objective_profile;  // (alpha, M(alpha)), sorted
  double objective_at_opt = 0.0;
  std::size_t n_used = 0;
  std::optional<double> derivative_at_opt;  // empty at alpha in {-1, 0, 1}
  SystemKind system = SystemKind::PerturbThenMap;
  bool flat_objective = false;
  // Smallest grid slope among the contracted maps at alpha_hat; a value near
  // zero means the inversions in S_alpha were ill-conditioned.
  double min_contracted_slope = 0.0;
  bool ill_conditioned = false;
};

/// S_alpha for a series T_0..T_N (needs N >= 1).
UnitMap ergodic_s(const MapSeries& series, double alpha);

/// Profiled least-squares objective M(alpha).
double objective(const MapSeries& series, double alpha);

/// Same estimator S_alpha, but each residual is pushed through the previous
/// quantile curve before integration:
///   (1/N) sum_i || (S_alpha o [alpha T_{i-1}]) o q_{i-1} - q_i ||_2^2,
/// i.e. the mean squared Wasserstein error of the one-step prediction under
/// the increment reading (curves[i] pairs with series.maps[i]).
double objective_pushforward(const MapSeries& series, const std::vector<QuantileCurve>& curves,
                             double alpha);

/// Analytic dM/dalpha from the chain rule through S_alpha and the
/// contraction (separate branches for alpha > 0 and alpha < 0). Throws
/// DomainError at alpha = 0 and for |alpha| >= 1.
double objective_derivative(const MapSeries& series, double alpha,
                            SlopeRule rule = SlopeRule::Central);

/// Plug-in estimator for the perturb-then-map system: coarse scan of M over
/// the alpha grid, golden-section refinement around the best scan point.
FitResult fit(const MapSeries& series, const FitConfig& cfg = {});

/// Residual objective of the contract-about system for a given S.
double objective_contract_about(const MapSeries& series, const UnitMap& s, double alpha);

/// Estimator for the contract-about system.
FitResult fit_alt(const MapSeries& series, const FitConfig& cfg = {});

}  // namespace war
