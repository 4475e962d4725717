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
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "war/dynamics.hpp"
#include "war/error.hpp"
#include "war/estimation.hpp"
#include "war/transport.hpp"

namespace war {
namespace {

MapSeries noisy_chain(double alpha, const UnitMap& s, std::size_t n, std::uint64_t seed,
                      SystemKind system = SystemKind::PerturbThenMap) {
  ChainConfig cfg;
  cfg.burn_in = 100;
  cfg.n_steps = cfg.burn_in + n + 1;
  cfg.seed = Seed{seed};
  return simulate_chain({alpha, s, system}, cfg, NoiseSpec{});
}

MapSeries noiseless_chain(double alpha, const UnitMap& s, std::size_t n,
                          SystemKind system = SystemKind::PerturbThenMap) {
  // No burn-in: the transient from the identity is what identifies alpha.
  ChainConfig cfg;
  cfg.burn_in = 0;
  cfg.n_steps = n + 1;
  return simulate_chain({alpha, s, system}, cfg, NoiseSpec::none());
}

// Direct evaluation of the objective through the public map algebra.
double objective_oracle(const MapSeries& series, double alpha) {
  const std::size_t n = series.size() - 1;
  std::vector<UnitMap> parts;
  for (std::size_t j = 1; j <= n; ++j) {
    parts.push_back(compose(series.maps[j], invert(contract(alpha, series.maps[j - 1]))));
  }
  const UnitMap s = mean_map(parts);
  double total = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    const double d = lp_distance(compose(s, contract(alpha, series.maps[i - 1])), series.maps[i], 2.0);
    total += d * d;
  }
  return total / n;
}

TEST_SUITE("estimation") {
  TEST_CASE("objective agrees with a direct evaluation through the map algebra") {
    const MapSeries series = noisy_chain(0.4, zeta_map(-2), 40, 3);
    for (double alpha : {-0.7, -0.2, 0.0, 0.35, 0.8, 1.0}) {
      CAPTURE(alpha);
      CHECK(objective(series, alpha) == doctest::Approx(objective_oracle(series, alpha)).epsilon(1e-6));
    }
  }

  TEST_CASE("ergodic_s at alpha 0 is the mean of T_1..T_N") {
    const MapSeries series = noisy_chain(0.2, zeta_map(-4), 30, 4);
    const std::vector<UnitMap> tail(series.maps.begin() + 1, series.maps.end());
    CHECK(sup_distance(ergodic_s(series, 0.0), mean_map(tail)) < 1e-15);
  }

  TEST_CASE("noiseless recovery of alpha and S") {
    const UnitMap s = zeta_map(-2);
    const MapSeries series = noiseless_chain(0.5, s, 200);
    CHECK(objective(series, 0.5) <= 1e-6);
    const FitResult r = fit(series);
    CHECK(std::fabs(r.alpha_hat - 0.5) <= 1e-3);
    CHECK(lp_distance(r.s_hat, s, 2.0) <= 5.0 / 1000.0);
    CHECK_FALSE(r.flat_objective);
  }

  TEST_CASE("noiseless profile has a single local minimum on the scan grid") {
    for (double alpha : {-0.5, 0.3, 0.7}) {
      const MapSeries series = noiseless_chain(alpha, zeta_map(-2), 100);
      FitConfig cfg;
      cfg.alpha_grid_step = 0.02;
      const FitResult r = fit(series, cfg);
      std::size_t minima = 0;
      const auto& p = r.objective_profile;
      for (std::size_t i = 1; i + 1 < p.size(); ++i) {
        if (p[i].second < p[i - 1].second && p[i].second < p[i + 1].second) ++minima;
      }
      CAPTURE(alpha);
      CHECK(minima == 1);
    }
  }

  TEST_CASE("a constant series gives S exactly and a flat objective") {
    const UnitMap s = zeta_map(-3);
    MapSeries series;
    series.maps.assign(20, s);
    const FitResult r = fit(series);
    CHECK(r.s_hat == s);
    CHECK(r.flat_objective);
    CHECK(r.alpha_hat == 0.0);
    CHECK(r.objective_at_opt == doctest::Approx(0.0).epsilon(1e-12));
  }

  TEST_CASE("profile is sorted, contains alpha_hat and alpha_hat minimizes it") {
    const MapSeries series = noisy_chain(0.3, zeta_map(-2), 100, 5);
    const FitResult r = fit(series);
    const auto& p = r.objective_profile;
    CHECK(std::is_sorted(p.begin(), p.end()));
    CHECK(p.front().first == -1.0);
    CHECK(p.back().first == 1.0);
    const auto hit = std::find_if(p.begin(), p.end(), [&](const auto& q) { return q.first == r.alpha_hat; });
    REQUIRE(hit != p.end());
    for (const auto& q : p) CHECK(r.objective_at_opt <= q.second);
    REQUIRE(r.derivative_at_opt.has_value());
    CHECK(r.n_used == 100);
    CHECK(r.min_contracted_slope > 0.0);
  }

  TEST_CASE("analytic derivative matches central differences") {
    const MapSeries series = noisy_chain(0.3, zeta_map(-2), 100, 6);
    for (double alpha : {-0.8, -0.35, -0.1, 0.15, 0.45, 0.85}) {
      const double h = 1e-4;
      const double fd = (objective(series, alpha + h) - objective(series, alpha - h)) / (2 * h);
      for (SlopeRule rule : {SlopeRule::Central, SlopeRule::Segment}) {
        CAPTURE(alpha);
        CHECK(objective_derivative(series, alpha, rule) == doctest::Approx(fd).epsilon(1e-3));
      }
    }
    CHECK_THROWS_AS(objective_derivative(series, 0.0), DomainError);
    CHECK_THROWS_AS(objective_derivative(series, 1.0), DomainError);
  }

  TEST_CASE("alpha endpoints are scored exactly") {
    // A pure random walk of maps (alpha = 1) is best explained at alpha = 1.
    ChainConfig cfg;
    cfg.burn_in = 0;
    cfg.n_steps = 80;
    const MapSeries walk = simulate_chain({1.0, UnitMap::identity(), SystemKind::PerturbThenMap}, cfg,
                                          NoiseSpec{});
    const FitResult r = fit(walk);
    CHECK(r.alpha_hat > 0.9);
    FitConfig no_ends;
    no_ends.score_unit_endpoints = false;
    const FitResult inner = fit(walk, no_ends);
    CHECK(inner.alpha_hat <= 0.999);
  }

  TEST_CASE("contract-about fit recovers alpha on a noiseless chain") {
    const UnitMap s = zeta_map(-2);
    const MapSeries series = noiseless_chain(0.6, s, 2000, SystemKind::ContractAbout);
    const FitResult r = fit_alt(series);
    CHECK(r.system == SystemKind::ContractAbout);
    CHECK(std::fabs(r.alpha_hat - 0.6) <= 2e-3);
    CHECK(objective_contract_about(series, r.s_hat, r.alpha_hat) == doctest::Approx(r.objective_at_opt));
  }

  TEST_CASE("contract-about fit on a noisy chain lands near the truth") {
    const MapSeries series = noisy_chain(-0.4, zeta_map(-2), 400, 7, SystemKind::ContractAbout);
    const FitResult r = fit_alt(series);
    CHECK(std::fabs(r.alpha_hat + 0.4) < 0.15);
  }

  TEST_CASE("configuration and input errors") {
    FitConfig bad;
    bad.alpha_grid_step = 0.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = FitConfig{};
    bad.alpha_lo = 0.5;
    bad.alpha_hi = 0.2;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    MapSeries one;
    one.maps.push_back(UnitMap::identity());
    CHECK_THROWS_AS(fit(one), InputError);
    CHECK_THROWS_AS(objective(noisy_chain(0.1, UnitMap::identity(), 5, 1), 1.5), DomainError);
  }
}

}  // namespace
}  // namespace war
