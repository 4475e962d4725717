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

// Iterated random systems of transport maps and their readings as
// distributional time series.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "war/noise.hpp"
#include "war/rng.hpp"
#include "war/unit_map.hpp"

namespace war {

enum class SystemKind {
  PerturbThenMap,  // T_i = (T_eps o S) o [alpha T_{i-1}]
  ContractAbout,   // T_i = T_eps o alpha[T_{i-1}, S]
};

std::string_view to_string(SystemKind kind);
SystemKind parse_system_kind(std::string_view name);

struct ModelParams {
  double alpha = 0.0;
  UnitMap s = UnitMap::identity();
  SystemKind system = SystemKind::PerturbThenMap;

  /// PerturbThenMap admits |alpha| <= 1, ContractAbout |alpha| < 1.
  void validate() const;
};

enum class ModelKindTag { Increment, UniformQuantile, GeneralizedQuantile };

std::string_view to_string(ModelKindTag tag);
ModelKindTag parse_model_kind(std::string_view name);

/// How a map chain is read as a series of distributions. The reference
/// measure is required exactly for GeneralizedQuantile.
struct ModelKind {
  ModelKindTag tag = ModelKindTag::UniformQuantile;
  std::optional<QuantileCurve> reference;

  static ModelKind increment() { return {ModelKindTag::Increment, std::nullopt}; }
  static ModelKind uniform_quantile() { return {ModelKindTag::UniformQuantile, std::nullopt}; }
  static ModelKind generalized_quantile(QuantileCurve mu) {
    return {ModelKindTag::GeneralizedQuantile, std::move(mu)};
  }

  void validate() const;
};

struct SeriesMeta {
  std::size_t burn_in = 0;
  std::optional<Seed> seed;
  std::optional<double> alpha;
  std::optional<SystemKind> system;
  std::string s_name;
  std::optional<NoiseSpec> noise;
};

/// The chain T_0, T_1, ... on one shared grid.
struct MapSeries {
  std::vector<UnitMap> maps;
  SeriesMeta meta;

  [[nodiscard]] std::size_t size() const { return maps.size(); }
  [[nodiscard]] std::size_t grid_size() const { return maps.empty() ? 0 : maps.front().grid_size(); }

  /// Throws InputError when the maps do not share one grid.
  void validate() const;
};

struct ChainConfig {
  std::size_t n_steps = 300;
  std::size_t burn_in = 100;
  UnitMap init = UnitMap::identity();
  Seed seed{};

  void validate() const;
};

/// One transition of the chain.
UnitMap step(const ModelParams& params, const UnitMap& t_prev, const UnitMap& eps);

/// Runs n_steps transitions from cfg.init, drawing one noise map per step
/// from the stream keyed by cfg.seed, and keeps the maps after burn-in.
MapSeries simulate_chain(const ModelParams& params, const ChainConfig& cfg, const NoiseSpec& spec);

/// Distribution series implied by a map chain:
///   Increment:           q_i = T_i o q_{i-1}, starting from q_{-1} = init_q
///   UniformQuantile:     q_i = T_i                 (on init_q's domain)
///   GeneralizedQuantile: q_i = T_i o q_mu
std::vector<QuantileCurve> series_to_distributions(const MapSeries& series, const ModelKind& kind,
                                                   const QuantileCurve& init_q);

/// Inverse of series_to_distributions. For Increment, T_0 = q_0 o init^{-1}
/// where init defaults to q_0 itself (so T_0 = id).
MapSeries maps_from_distributions(const std::vector<QuantileCurve>& curves, const ModelKind& kind,
                                  const std::optional<QuantileCurve>& init = std::nullopt);

struct StationarityReport {
  double l_s = 0.0;
  double l_eps = 0.0;
  double product = 0.0;  // |alpha| L_S L_eps
  double r = 0.0;        // sqrt(product)
  bool satisfied = false;
  // Negative alpha: the sufficient condition additionally needs the chain to
  // stay inside a slope band, which cannot be checked a priori.
  bool negative_alpha_caveat = false;

  [[nodiscard]] bool in_theory_region() const { return satisfied && !negative_alpha_caveat; }
};

StationarityReport check_stationarity_condition(const ModelParams& params, const NoiseSpec& spec);

/// Built-in maps by name: "id", "zeta:K", "kinked", "steps", "mixed".
UnitMap builtin_map(std::string_view name, std::size_t m = kDefaultGridSize);

}  // namespace war
