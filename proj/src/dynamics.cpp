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

#include "war/dynamics.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <string>
#include <utility>

#include "war/error.hpp"
#include "war/transport.hpp"

namespace war {

std::string_view to_string(SystemKind kind) {
  return kind == SystemKind::PerturbThenMap ? "perturb-then-map" : "contract-about";
}

SystemKind parse_system_kind(std::string_view name) {
  if (name == "perturb-then-map" || name == "perturb") return SystemKind::PerturbThenMap;
  if (name == "contract-about") return SystemKind::ContractAbout;
  throw ConfigError("unknown system kind '" + std::string(name) + "'");
}

std::string_view to_string(ModelKindTag tag) {
  switch (tag) {
    case ModelKindTag::Increment:
      return "increment";
    case ModelKindTag::UniformQuantile:
      return "uq";
    case ModelKindTag::GeneralizedQuantile:
      return "gq";
  }
  return "?";
}

ModelKindTag parse_model_kind(std::string_view name) {
  if (name == "increment" || name == "i") return ModelKindTag::Increment;
  if (name == "uq" || name == "uniform-quantile") return ModelKindTag::UniformQuantile;
  if (name == "gq" || name == "generalized-quantile") return ModelKindTag::GeneralizedQuantile;
  throw ConfigError("unknown model kind '" + std::string(name) + "'");
}

void ModelParams::validate() const {
  if (system == SystemKind::PerturbThenMap && !(std::fabs(alpha) <= 1.0)) {
    throw DomainError("perturb-then-map requires |alpha| <= 1");
  }
  if (system == SystemKind::ContractAbout && !(std::fabs(alpha) < 1.0)) {
    throw DomainError("contract-about requires |alpha| < 1");
  }
}

void ModelKind::validate() const {
  const bool needs = tag == ModelKindTag::GeneralizedQuantile;
  if (needs && !reference) throw ConfigError("generalized-quantile model needs a reference measure");
  if (!needs && reference) throw ConfigError("reference measure only applies to the gq model");
}

void MapSeries::validate() const {
  for (const auto& m : maps) {
    if (m.grid_size() != maps.front().grid_size()) throw InputError("map series mixes grid sizes");
  }
}

void ChainConfig::validate() const {
  if (n_steps == 0) throw ConfigError("chain needs n_steps > 0");
  if (burn_in >= n_steps) throw ConfigError("burn_in must be smaller than n_steps");
}

UnitMap step(const ModelParams& params, const UnitMap& t_prev, const UnitMap& eps) {
  params.validate();
  if (params.system == SystemKind::PerturbThenMap) {
    // theta = T_eps o S is formed first, then applied to the contracted map.
    const UnitMap theta = compose(eps, params.s);
    return compose(theta, contract(params.alpha, t_prev));
  }
  return compose(eps, contract_about(params.alpha, t_prev, params.s));
}

MapSeries simulate_chain(const ModelParams& params, const ChainConfig& cfg, const NoiseSpec& spec) {
  params.validate();
  cfg.validate();
  spec.validate();
  const std::size_t m = cfg.init.grid_size();
  if (params.s.grid_size() != m) throw ConfigError("S and the initial map use different grids");

  MapSeries out;
  out.maps.reserve(cfg.n_steps - cfg.burn_in);
  out.meta.burn_in = cfg.burn_in;
  out.meta.seed = cfg.seed;
  out.meta.alpha = params.alpha;
  out.meta.system = params.system;
  out.meta.noise = spec;

  Rng rng(cfg.seed);
  UnitMap t = cfg.init;
  for (std::size_t i = 1; i <= cfg.n_steps; ++i) {
    const UnitMap eps = sample_noise_map(spec, rng, m);
    try {
      t = step(params, t, eps);
    } catch (const DegenerateMapError& e) {
      throw DegenerateMapError("chain aborted at step " + std::to_string(i) + ": " + e.what());
    }
    if (i > cfg.burn_in) out.maps.push_back(t);
  }
  return out;
}

namespace {

void require_domain(const QuantileCurve& q, const Interval& domain) {
  if (!(q.domain() == domain)) throw DomainError("quantile curves must share one domain");
}

}  // namespace

std::vector<QuantileCurve> series_to_distributions(const MapSeries& series, const ModelKind& kind,
                                                   const QuantileCurve& init_q) {
  kind.validate();
  series.validate();
  std::vector<QuantileCurve> out;
  out.reserve(series.size());
  switch (kind.tag) {
    case ModelKindTag::Increment: {
      const QuantileCurve* prev = &init_q;
      for (const auto& t : series.maps) {
        out.emplace_back(init_q.domain(), compose(t, prev->unit()));
        prev = &out.back();
      }
      break;
    }
    case ModelKindTag::UniformQuantile:
      for (const auto& t : series.maps) out.emplace_back(init_q.domain(), t);
      break;
    case ModelKindTag::GeneralizedQuantile: {
      const QuantileCurve& mu = *kind.reference;
      for (const auto& t : series.maps) out.emplace_back(mu.domain(), compose(t, mu.unit()));
      break;
    }
  }
  return out;
}

MapSeries maps_from_distributions(const std::vector<QuantileCurve>& curves, const ModelKind& kind,
                                  const std::optional<QuantileCurve>& init) {
  kind.validate();
  MapSeries out;
  if (curves.empty()) return out;
  out.maps.reserve(curves.size());
  switch (kind.tag) {
    case ModelKindTag::Increment: {
      const Interval& domain = curves.front().domain();
      for (const auto& q : curves) require_domain(q, domain);
      if (init) {
        require_domain(*init, domain);
        out.maps.push_back(compose(curves.front().unit(), invert(init->unit())));
      } else {
        out.maps.push_back(UnitMap::identity(curves.front().unit().grid_size()));
      }
      for (std::size_t i = 1; i < curves.size(); ++i) {
        out.maps.push_back(compose(curves[i].unit(), invert(curves[i - 1].unit())));
      }
      break;
    }
    case ModelKindTag::UniformQuantile:
      for (const auto& q : curves) out.maps.push_back(q.unit());
      break;
    case ModelKindTag::GeneralizedQuantile: {
      const QuantileCurve& mu = *kind.reference;
      const UnitMap mu_inverse = invert(mu.unit());
      for (const auto& q : curves) {
        require_domain(q, mu.domain());
        out.maps.push_back(compose(q.unit(), mu_inverse));
      }
      break;
    }
  }
  out.validate();
  return out;
}

StationarityReport check_stationarity_condition(const ModelParams& params, const NoiseSpec& spec) {
  if (params.system != SystemKind::PerturbThenMap) {
    throw ConfigError("stationarity check applies to the perturb-then-map system");
  }
  params.validate();
  spec.validate();
  StationarityReport r;
  r.l_s = max_slope(params.s);
  r.l_eps = lipschitz_bound(spec);
  r.product = std::fabs(params.alpha) * r.l_s * r.l_eps;
  r.r = std::sqrt(r.product);
  r.satisfied = r.product < 1.0;
  r.negative_alpha_caveat = params.alpha < 0.0;
  return r;
}

namespace {

// Piecewise-linear map through the given knots (x strictly increasing).
double through_knots(std::span<const std::pair<double, double>> knots, double x) {
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (x <= knots[i].first) {
      const auto [x0, y0] = knots[i - 1];
      const auto [x1, y1] = knots[i];
      return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
    }
  }
  return knots.back().second;
}

}  // namespace

UnitMap builtin_map(std::string_view name, std::size_t m) {
  if (name == "id") return UnitMap::identity(m);
  if (name.starts_with("zeta:")) {
    const std::string_view num = name.substr(5);
    int k = 0;
    const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), k);
    if (ec != std::errc() || ptr != num.data() + num.size()) {
      throw ConfigError("bad built-in map name '" + std::string(name) + "'");
    }
    return zeta_map(k, m);
  }
  if (name == "kinked") {
    static constexpr std::array<std::pair<double, double>, 4> knots{
        {{0.0, 0.0}, {0.3, 0.15}, {0.6, 0.75}, {1.0, 1.0}}};
    return UnitMap::sample(m, [](double x) { return through_knots(knots, x); });
  }
  if (name == "steps") {
    // Two plateaus joined by jumps one grid cell wide.
    const double cell = 1.0 / static_cast<double>(m);
    const std::array<std::pair<double, double>, 6> knots{
        {{0.0, 0.0}, {0.3, 0.1}, {0.3 + cell, 0.45}, {0.65, 0.5}, {0.65 + cell, 0.85}, {1.0, 1.0}}};
    return UnitMap::sample(m, [&](double x) { return through_knots(knots, x); });
  }
  if (name == "mixed") {
    // Average of zeta_1 and one fixed draw of the default noise law.
    Rng rng(Seed{0x5EEDULL});
    const std::array<UnitMap, 2> parts{zeta_map(1, m), sample_noise_map(NoiseSpec{}, rng, m)};
    return mean_map(parts);
  }
  throw ConfigError("unknown built-in map '" + std::string(name) + "'");
}

}  // namespace war
