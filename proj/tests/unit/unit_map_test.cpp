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
#include <cmath>
#include <vector>

#include "doctest.h"
#include "war/error.hpp"
#include "war/unit_map.hpp"

namespace war {
namespace {

TEST_SUITE("unit_map") {
  TEST_CASE("identity has M + 1 evenly spaced values") {
    const UnitMap id = UnitMap::identity(4);
    CHECK(id.grid_size() == 4);
    CHECK(std::vector<double>(id.values().begin(), id.values().end()) ==
          std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
    CHECK(UnitMap::identity().grid_size() == kDefaultGridSize);
    CHECK_THROWS_AS(UnitMap::identity(0), DomainError);
  }

  TEST_CASE("from_values enforces the invariants exactly") {
    CHECK_NOTHROW(UnitMap::from_values({0.0, 0.3, 1.0}));
    CHECK_THROWS_AS(UnitMap::from_values({0.0, 0.3, 0.3, 1.0}), DegenerateMapError);
    CHECK_THROWS_AS(UnitMap::from_values({0.1, 0.3, 1.0}), DegenerateMapError);
    CHECK_THROWS_AS(UnitMap::from_values({0.0, 0.3, 0.9}), DegenerateMapError);
    CHECK_THROWS_AS(UnitMap::from_values({0.0, 0.6, 0.3, 1.0}), DegenerateMapError);
    CHECK_THROWS_AS(UnitMap::from_values({0.0}), DegenerateMapError);
  }

  TEST_CASE("evaluation interpolates linearly and rejects points outside [0, 1]") {
    const UnitMap m = UnitMap::from_values({0.0, 0.2, 1.0});
    CHECK(m(0.0) == 0.0);
    CHECK(m(0.5) == doctest::Approx(0.2));
    CHECK(m(0.25) == doctest::Approx(0.1));
    CHECK(m(0.75) == doctest::Approx(0.6));
    CHECK(m(1.0) == 1.0);
    CHECK_THROWS_AS(m(-0.01), DomainError);
    CHECK_THROWS_AS(m(1.01), DomainError);
  }

  TEST_CASE("from_data separates ties with a tiny ramp") {
    const UnitMap m = UnitMap::from_data({0.0, 0.4, 0.4, 0.4, 1.0});
    for (std::size_t k = 1; k < 5; ++k) CHECK(m[k] > m[k - 1]);
    CHECK(m[1] == 0.4);
    CHECK(m[3] - m[1] <= kTieRamp);
  }

  TEST_CASE("from_data repairs a flat run touching the top end") {
    const UnitMap m = UnitMap::from_data({0.0, 0.5, 1.0, 1.0, 1.0});
    for (std::size_t k = 1; k < 5; ++k) CHECK(m[k] > m[k - 1]);
    CHECK(m[4] == 1.0);
    CHECK(m[2] >= 1.0 - kTieRamp);
  }

  TEST_CASE("from_data renormalizes the endpoints") {
    const UnitMap m = UnitMap::from_data({0.1, 0.3, 0.5});
    CHECK(m[0] == 0.0);
    CHECK(m[1] == doctest::Approx(0.5));
    CHECK(m[2] == 1.0);
  }

  TEST_CASE("from_data rejects genuine decreases, out-of-range values and constants") {
    CHECK_THROWS_AS(UnitMap::from_data({0.0, 0.5, 0.4, 1.0}), DegenerateMapError);
    CHECK_THROWS_AS(UnitMap::from_data({0.0, 1.5, 1.0}), DegenerateMapError);
    CHECK_THROWS_AS(UnitMap::from_data({0.5, 0.5, 0.5}), DegenerateMapError);
  }

  TEST_CASE("ramps survive gaps narrower than the ramp itself") {
    // Two points squeezed between nearly equal neighbours.
    const double base = 0.5;
    const double next = std::nextafter(std::nextafter(base, 1.0), 1.0);
    std::vector<double> v{0.0, base, base, base, next, 1.0};
    CHECK(detail::repair_ties(v) >= 1);
    for (std::size_t k = 1; k < v.size(); ++k) CHECK(v[k] > v[k - 1]);
  }

  TEST_CASE("sample builds a map from a function") {
    const UnitMap sq = UnitMap::sample(100, [](double x) { return x * x; });
    CHECK(sq[50] == doctest::Approx(0.25));
  }

  TEST_CASE("quantile curves de-normalize onto their domain") {
    const QuantileCurve q(Interval(10.0, 30.0), UnitMap::identity(10));
    CHECK(q(0.5) == doctest::Approx(20.0));
    CHECK(q.values().front() == 10.0);
    CHECK(q.values().back() == 30.0);
    CHECK_THROWS_AS(Interval(1.0, 1.0), DomainError);
    CHECK_THROWS_AS(Interval(0.0, std::nan("")), DomainError);
  }
}

}  // namespace
}  // namespace war
