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
#include <random>
#include <sstream>

#include "doctest.h"
#include "support.hpp"
#include "war/error.hpp"
#include "war/ingest.hpp"

namespace war {
namespace {

SampleTable parse(const std::string& text, ColumnSpec spec = {}) {
  std::istringstream in(text);
  return parse_samples(in, spec);
}

TEST_SUITE("ingest") {
  TEST_CASE("two periods of two values") {
    const SampleTable t = parse("period,value\n2001,1.5\n2000,3\n2001,2.5\n2000,4\n");
    REQUIRE(t.periods.size() == 2);
    CHECK(t.periods[0] == "2000");
    CHECK(t.periods[1] == "2001");
    CHECK(t.values[0] == std::vector<double>{3.0, 4.0});
    CHECK(t.dropped_rows == 0);
  }

  TEST_CASE("missing values are dropped and counted") {
    const SampleTable t = parse("period,value\na,1\na,\na,2\nb,5\nb,6\n");
    CHECK(t.dropped_rows == 1);
    CHECK(t.values[0].size() == 2);
    CHECK(parse("period,value\na,1\na,NaN\na,2\nb,5\nb,6\n").dropped_rows == 1);
  }

  TEST_CASE("numeric periods sort numerically, others lexicographically") {
    const SampleTable t = parse("period,value\n10,1\n10,2\n9,1\n9,2\n");
    CHECK(t.periods == std::vector<std::string>{"9", "10"});
    const SampleTable u = parse("period,value\nb,1\nb,2\na,1\na,2\n");
    CHECK(u.periods == std::vector<std::string>{"a", "b"});
  }

  TEST_CASE("quoted fields, custom columns and delimiters") {
    ColumnSpec spec;
    spec.period_column = "year";
    spec.value_column = "tmin";
    spec.delimiter = ';';
    spec.value_scale = 0.1;
    const SampleTable t = parse("\"year\";\"note\";tmin\n1999;\"a;b\";100\n1999;\"x \"\"y\"\"\";200\n", spec);
    REQUIRE(t.periods.size() == 1);
    CHECK(t.values[0][0] == doctest::Approx(10.0));
    CHECK(t.values[0][1] == doctest::Approx(20.0));
  }

  TEST_CASE("date column with month and year filters") {
    ColumnSpec spec;
    spec.period_column = "";
    spec.date_column = "DATE";
    spec.value_column = "TMIN";
    spec.months = {6, 7, 8, 9};
    spec.year_from = 1960;
    spec.year_to = 1961;
    const std::string text =
        "STATION,DATE,TMIN\n"
        "X,1959-07-01,5\nX,1959-07-02,6\n"
        "X,1960-05-31,99\nX,1960-06-01,10\nX,1960-09-30,12\n"
        "X,19610615,20\nX,19610616,21\nX,1961-10-01,99\n"
        "X,1962-07-01,7\nX,1962-07-02,8\n";
    const SampleTable t = parse(text, spec);
    CHECK(t.periods == std::vector<std::string>{"1960", "1961"});
    CHECK(t.values[0] == std::vector<double>{10.0, 12.0});
    CHECK(t.values[1] == std::vector<double>{20.0, 21.0});
  }

  TEST_CASE("input errors") {
    CHECK_THROWS_AS(parse(""), InputError);
    CHECK_THROWS_AS(parse("period,other\na,1\n"), InputError);
    CHECK_THROWS_AS(parse("period,value\na,1\na,2\nb,3\n"), InputError);  // b has one value
    CHECK_THROWS_AS(parse("period,value\na,\"1\n"), InputError);
    ColumnSpec spec;
    spec.months = {7};
    CHECK_THROWS_AS(parse("period,value\na,1\n", spec), ConfigError);
    CHECK_THROWS_AS(load_samples("/nonexistent/file.csv", ColumnSpec{}), InputError);
  }

  TEST_CASE("order-statistic interpolation") {
    CHECK(sample_quantiles({0.0, 1.0}, 2) == std::vector<double>{0.0, 0.5, 1.0});
    const auto q = sample_quantiles({1.0, 2.0, 4.0}, 4);
    CHECK(q == std::vector<double>{1.0, 1.5, 2.0, 3.0, 4.0});
  }

  TEST_CASE("samples 0 and 1 on the domain [0, 1]") {
    SampleTable t;
    t.periods = {"p"};
    t.values = {{0.0, 1.0}};
    const EmpiricalSeries s = empirical_quantiles(t, 10, Interval(0.0, 1.0));
    for (std::size_t k = 0; k <= 10; ++k) CHECK(s.curves[0].unit()[k] == doctest::Approx(k / 10.0));
    CHECK_FALSE(s.warning());
  }

  TEST_CASE("a grid sample gives a curve within O(1/n) of the identity") {
    SampleTable t;
    t.periods = {"p"};
    std::vector<double> v;
    const int n = 200;
    for (int k = 0; k <= n; ++k) v.push_back(static_cast<double>(k) / n);
    t.values = {v};
    const EmpiricalSeries s = empirical_quantiles(t, 1000, Interval(0.0, 1.0));
    CHECK(testing::max_abs_diff(s.curves[0].unit().values(), UnitMap::identity().values()) <= 1.0 / n);
  }

  TEST_CASE("identical samples give a ramped near-constant curve and a warning") {
    SampleTable t;
    t.periods = {"a", "b"};
    t.values = {{0.3, 0.3, 0.3}, {0.1, 0.9}};
    const EmpiricalSeries s = empirical_quantiles(t, 100, Interval(0.0, 1.0));
    CHECK(s.warning());
    CHECK(s.tie_repaired == std::vector<std::string>{"a"});
    const UnitMap& u = s.curves[0].unit();
    CHECK(u[50] == doctest::Approx(0.3).epsilon(1e-8));
    for (std::size_t k = 1; k <= 100; ++k) CHECK(u[k] > u[k - 1]);
  }

  TEST_CASE("default domain pads the global range by one percent") {
    SampleTable t;
    t.periods = {"a", "b"};
    t.values = {{10.0, 12.0}, {11.0, 20.0}};
    const EmpiricalSeries s = empirical_quantiles(t, 10);
    CHECK(s.domain.lo() == doctest::Approx(9.9));
    CHECK(s.domain.hi() == doctest::Approx(20.1));
    for (const auto& c : s.curves) CHECK(c.domain() == s.domain);
    CHECK(s.curves[1](0.5) == doctest::Approx(15.5));
    CHECK_THROWS_AS(empirical_quantiles(t, 10, Interval(10.5, 30.0)), InputError);
    CHECK_THROWS_AS(empirical_quantiles(t, 5), ConfigError);
  }

  TEST_CASE("permutation invariance and affine equivariance") {
    std::mt19937_64 gen(31);
    std::normal_distribution<double> nd(15.0, 3.0);
    SampleTable t;
    t.periods = {"a", "b", "c"};
    t.values.resize(3);
    for (auto& v : t.values) {
      for (int i = 0; i < 90; ++i) v.push_back(nd(gen));
    }
    const EmpiricalSeries base = empirical_quantiles(t, 200);

    SampleTable shuffled = t;
    for (auto& v : shuffled.values) std::shuffle(v.begin(), v.end(), gen);
    const EmpiricalSeries same = empirical_quantiles(shuffled, 200);
    for (std::size_t i = 0; i < 3; ++i) CHECK(same.curves[i] == base.curves[i]);

    SampleTable moved = t;
    for (auto& v : moved.values) {
      for (double& x : v) x = 2.0 * x + 7.0;
    }
    const EmpiricalSeries affine = empirical_quantiles(moved, 200);
    for (std::size_t i = 0; i < 3; ++i) {
      const auto a = base.curves[i].values();
      const auto b = affine.curves[i].values();
      for (std::size_t k = 0; k < a.size(); ++k) CHECK(b[k] == doctest::Approx(2.0 * a[k] + 7.0).epsilon(1e-12));
    }
  }
}

}  // namespace
}  // namespace war
